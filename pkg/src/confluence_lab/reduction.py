"""One-step beta, eta and beta-eta reduction plus bounded closures.

A :class:`Relation` is a total function from a term to the ordered,
duplicate-free tuple of its one-step reducts. Redexes are enumerated in
pre-order (outermost-leftmost first); a redex position is a tuple of child
selectors (0 = function/body, 1 = argument), so pre-order is tuple order.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Optional, Sequence, Union

from .terms import App, Lam, Term, Var, occurs, strengthen, subst

Path = tuple[int, ...]
Step = tuple[Path, Hashable]
Trace = tuple  # source first; consecutive entries related by one step


def dedup(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True, eq=False)
class Relation:
    """A named one-step reduction.

    ``steps`` optionally exposes positioned reducts; relations built from
    positioned relations (see :func:`union_rel`) merge in redex order.
    """

    name: str
    reducts: Callable[[Hashable], tuple]
    steps: Optional[Callable[[Hashable], Sequence[Step]]] = None

    def __call__(self, t) -> tuple:
        return self.reducts(t)


@dataclass(frozen=True)
class Counterexample:
    peak: Hashable
    left: Hashable
    right: Hashable
    left_trace: Trace
    right_trace: Trace
    reason: str


# -- beta ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def beta_steps(t: Term) -> tuple[Step, ...]:
    match t:
        case Var():
            return ()
        case Lam(b):
            return tuple(((0, *p), Lam(r)) for p, r in beta_steps(b))
        case App(f, a):
            out: list[Step] = []
            if isinstance(f, Lam):
                out.append(((), subst(f.body, 0, a)))
            out.extend(((0, *p), App(r, a)) for p, r in beta_steps(f))
            out.extend(((1, *p), App(f, r)) for p, r in beta_steps(a))
            return tuple(out)
    raise TypeError(f"not a term: {t!r}")


@lru_cache(maxsize=None)
def beta_reducts(t: Term) -> tuple[Term, ...]:
    return dedup(r for _, r in beta_steps(t))


# -- eta ----------------------------------------------------------------------


def _eta_contract(t: Term) -> Optional[Term]:
    match t:
        case Lam(App(m, Var(0))) if not occurs(m, 0):
            return strengthen(m, 0)
    return None


@lru_cache(maxsize=None)
def eta_steps(t: Term) -> tuple[Step, ...]:
    match t:
        case Var():
            return ()
        case Lam(b):
            out: list[Step] = []
            top = _eta_contract(t)
            if top is not None:
                out.append(((), top))
            out.extend(((0, *p), Lam(r)) for p, r in eta_steps(b))
            return tuple(out)
        case App(f, a):
            return (tuple(((0, *p), App(r, a)) for p, r in eta_steps(f))
                    + tuple(((1, *p), App(f, r)) for p, r in eta_steps(a)))
    raise TypeError(f"not a term: {t!r}")


@lru_cache(maxsize=None)
def eta_reducts(t: Term) -> tuple[Term, ...]:
    return dedup(r for _, r in eta_steps(t))


def betaeta_steps(t: Term) -> tuple[Step, ...]:
    return tuple(heapq.merge(beta_steps(t), eta_steps(t), key=lambda s: s[0]))


@lru_cache(maxsize=None)
def betaeta_reducts(t: Term) -> tuple[Term, ...]:
    return dedup(r for _, r in betaeta_steps(t))


BETA = Relation("beta", beta_reducts, beta_steps)
ETA = Relation("eta", eta_reducts, eta_steps)
BETAETA = Relation("betaeta", betaeta_reducts, betaeta_steps)
EMPTY = Relation("empty", lambda t: (), lambda t: ())


def union_rel(r: Relation, s: Relation) -> Relation:
    """Pointwise union, deduplicated, keeping redex order when both are positioned."""
    name = f"{r.name}+{s.name}"
    if r.steps is not None and s.steps is not None:
        def steps(t):
            return tuple(heapq.merge(r.steps(t), s.steps(t), key=lambda st: st[0]))

        return Relation(name, lru_cache(maxsize=None)(lambda t: dedup(x for _, x in steps(t))), steps)
    return Relation(name, lru_cache(maxsize=None)(lambda t: dedup((*r.reducts(t), *s.reducts(t)))))


# -- closures -----------------------------------------------------------------


@dataclass(frozen=True)
class Reachable:
    """Breadth-first reachable set.

    ``order`` lists terms by discovery, ``depth`` records the step count of
    each. ``truncated`` means the node budget stopped the search; ``complete``
    means the whole (finite) reflexive-transitive closure was explored.
    """

    source: Hashable
    order: tuple
    depth: dict = field(repr=False)
    parent: dict = field(repr=False)
    truncated: bool
    complete: bool

    def __contains__(self, t) -> bool:
        return t in self.depth

    def __len__(self) -> int:
        return len(self.order)

    @property
    def terms(self) -> frozenset:
        return frozenset(self.order)

    def trace_to(self, t) -> Trace:
        path = [t]
        while path[-1] != self.source:
            path.append(self.parent[path[-1]])
        return tuple(reversed(path))


@lru_cache(maxsize=200_000)
def reachable(t, rel: Relation, depth_budget: int, node_budget: int) -> Reachable:
    if depth_budget <= 0 or node_budget <= 0:
        raise ValueError("budgets must be positive")
    depth = {t: 0}
    parent: dict = {}
    order = [t]
    frontier = [t]
    truncated = False
    d = 0
    while frontier and d < depth_budget and not truncated:
        d += 1
        nxt = []
        for u in frontier:
            for r in rel.reducts(u):
                if r in depth:
                    continue
                if len(order) >= node_budget:
                    truncated = True
                    break
                depth[r] = d
                parent[r] = u
                order.append(r)
                nxt.append(r)
            if truncated:
                break
        frontier = nxt
    complete = not truncated and all(r in depth for u in frontier for r in rel.reducts(u))
    return Reachable(t, tuple(order), depth, parent, truncated, complete)


@dataclass(frozen=True)
class Join:
    witness: Hashable
    left: Trace
    right: Trace


@dataclass(frozen=True)
class NotFoundWithinBudget:
    """No common reduct seen. ``closures_complete`` records that both
    closures were explored in full, so the search covered every reduct."""

    closures_complete: bool = False


def joinable(t1, t2, rel: Relation, depth_budget: int, node_budget: int) -> Union[Join, NotFoundWithinBudget]:
    """First common reduct in the breadth-first order of ``t1``, with shortest traces."""
    left = reachable(t1, rel, depth_budget, node_budget)
    right = reachable(t2, rel, depth_budget, node_budget)
    for u in left.order:
        if u in right:
            return Join(u, left.trace_to(u), right.trace_to(u))
    return NotFoundWithinBudget(left.complete and right.complete)


@dataclass(frozen=True)
class NormalForm:
    term: Hashable
    steps: int


@dataclass(frozen=True)
class FuelExhausted:
    last: Hashable


def normalize(t, rel: Relation, fuel: int) -> Union[NormalForm, FuelExhausted]:
    """Leftmost-outermost: always take the first reduct in canonical order."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    for n in range(fuel + 1):
        rs = rel.reducts(t)
        if not rs:
            return NormalForm(t, n)
        if n == fuel:
            break
        t = rs[0]
    return FuelExhausted(t)


def trace_to_json(trace: Trace, encode) -> dict:
    return {"steps": [encode(t) for t in trace]}


def join_to_json(join: Join, encode) -> dict:
    return {"witness": encode(join.witness),
            "left": trace_to_json(join.left, encode),
            "right": trace_to_json(join.right, encode)}


def clear_caches() -> None:
    for fn in (beta_steps, beta_reducts, eta_steps, eta_reducts, betaeta_reducts, reachable):
        fn.cache_clear()
