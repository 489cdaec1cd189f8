"""Exhaustive height-bounded generation and one-step counterexample search.

Height: variables (and ``()``) have height 0, every other constructor adds
one to the maximum height of its term children. Streams are height-major;
within a height level the order is fixed by the constructor order below and
then by the positions of the children in the lower levels.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import lru_cache
from itertools import chain
from typing import Iterable, Iterator, Optional, Sequence, Union

from . import systemf as sf
from .reduction import Counterexample, Relation
from .terms import App, Lam, Term, Var
from .workers import ordered_map

CALCULI = ("untyped", "systemf", "eta-ext", "simply-typed")


@dataclass(frozen=True)
class CorpusSpec:
    """Generator bounds.

    ``free_context_size`` applies to untyped corpora; typed corpora use
    ``context`` (a typing context) and draw annotations and type arguments
    from the types of height at most ``type_height``.
    """

    height_bound: int
    free_context_size: int = 0
    calculus: str = "untyped"
    target_type: Optional[sf.Ty] = None
    context: sf.TyCtx = ()
    type_height: int = 1

    def __post_init__(self) -> None:
        if self.height_bound < 0:
            raise ValueError("height_bound must be non-negative")
        if self.calculus not in CALCULI:
            raise ValueError(f"unknown calculus {self.calculus!r}")

    @property
    def typed(self) -> bool:
        return self.calculus != "untyped"

    def to_json(self) -> dict:
        out = {"height_bound": self.height_bound, "calculus": self.calculus}
        if self.typed:
            out["context"] = sf.tctx_to_json(self.context)
            out["type_height"] = self.type_height
            out["target_type"] = None if self.target_type is None else sf.type_to_json(self.target_type)
        else:
            out["free_context_size"] = self.free_context_size
        return out


# -- untyped ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _level(h: int, c: int) -> tuple[Term, ...]:
    if h == 0:
        return tuple(Var(i) for i in range(c))
    lams = [Lam(b) for b in _level(h - 1, c + 1)]
    below = _upto(h - 1, c)
    lower = len(below) - len(_level(h - 1, c))
    apps = [App(f, a)
            for i, f in enumerate(below)
            for j, a in enumerate(below)
            if i >= lower or j >= lower]
    return tuple(lams + apps)


@lru_cache(maxsize=None)
def _upto(h: int, c: int) -> tuple[Term, ...]:
    return tuple(chain.from_iterable(_level(k, c) for k in range(h + 1)))


def gen_terms(spec: CorpusSpec) -> Iterator[Term]:
    """Every untyped term within the bounds, exactly once, height-major."""
    if spec.typed:
        raise ValueError("gen_terms needs an untyped corpus spec")
    for k in range(spec.height_bound + 1):
        yield from _level(k, spec.free_context_size)


def count_terms(h: int, c: int) -> int:
    """Number of terms of height <= h with free indices < c."""
    if h == 0:
        return c
    return c + count_terms(h - 1, c + 1) + count_terms(h - 1, c) ** 2


# -- typed --------------------------------------------------------------------


@lru_cache(maxsize=None)
def _type_level(h: int, ntv: int, calculus: str) -> tuple[sf.Ty, ...]:
    if h == 0:
        base = [sf.TVar(i) for i in range(ntv)]
        if calculus == "eta-ext":
            base.append(sf.Unit())
        return tuple(base)
    below = _types_upto(h - 1, ntv, calculus)
    lower = len(below) - len(_type_level(h - 1, ntv, calculus))
    pairs = [(a, b) for i, a in enumerate(below) for j, b in enumerate(below) if i >= lower or j >= lower]
    out: list[sf.Ty] = [sf.Arr(a, b) for a, b in pairs]
    if calculus == "systemf":
        out.extend(sf.All(b) for b in _type_level(h - 1, ntv + 1, calculus))
    if calculus == "eta-ext":
        out.extend(sf.Prod(a, b) for a, b in pairs)
    return tuple(out)


@lru_cache(maxsize=None)
def _types_upto(h: int, ntv: int, calculus: str) -> tuple[sf.Ty, ...]:
    return tuple(chain.from_iterable(_type_level(k, ntv, calculus) for k in range(h + 1)))


def gen_types(height: int, ntv: int, calculus: str) -> tuple[sf.Ty, ...]:
    return _types_upto(height, ntv, calculus)


Typed = tuple  # (TTerm, Ty)


@lru_cache(maxsize=None)
def _tlevel(ctx: sf.TyCtx, h: int, calculus: str, th: int) -> tuple[Typed, ...]:
    if h == 0:
        nvars = sum(isinstance(e, sf.TermBind) for e in ctx)
        out = [(sf.TmVar(i), sf.lookup(ctx, i)) for i in range(nvars)]
        if calculus == "eta-ext":
            out.append((sf.TmUnit(), sf.Unit()))
        return tuple(out)
    ntv = sf.type_var_count(ctx)
    types = gen_types(th, ntv, calculus)
    out: list[Typed] = []
    for a in types:
        out.extend((sf.TmLam(a, b), sf.Arr(a, bt))
                   for b, bt in _tlevel((*ctx, sf.TermBind(a)), h - 1, calculus, th))
    if calculus == "systemf":
        out.extend((sf.TmTLam(b), sf.All(bt))
                   for b, bt in _tlevel((*ctx, sf.TypeBind()), h - 1, calculus, th))
    below = _tupto(ctx, h - 1, calculus, th)
    lower = len(below) - len(_tlevel(ctx, h - 1, calculus, th))
    for i, (f, ft) in enumerate(below):
        if isinstance(ft, sf.Arr):
            out.extend((sf.TmApp(f, a), ft.cod)
                       for j, (a, at) in enumerate(below)
                       if at == ft.dom and (i >= lower or j >= lower))
    if calculus == "systemf":
        for f, ft in _tlevel(ctx, h - 1, calculus, th):
            if isinstance(ft, sf.All):
                out.extend((sf.TmTApp(f, b), sf.ty_subst(ft.body, 0, b)) for b in types)
    if calculus == "eta-ext":
        out.extend((sf.TmPair(l, r), sf.Prod(lt, rt))
                   for i, (l, lt) in enumerate(below)
                   for j, (r, rt) in enumerate(below)
                   if i >= lower or j >= lower)
        top = _tlevel(ctx, h - 1, calculus, th)
        out.extend((sf.TmFst(p), pt.left) for p, pt in top if isinstance(pt, sf.Prod))
        out.extend((sf.TmSnd(p), pt.right) for p, pt in top if isinstance(pt, sf.Prod))
    return tuple(out)


@lru_cache(maxsize=None)
def _tupto(ctx: sf.TyCtx, h: int, calculus: str, th: int) -> tuple[Typed, ...]:
    return tuple(chain.from_iterable(_tlevel(ctx, k, calculus, th) for k in range(h + 1)))


def gen_typed_terms(spec: CorpusSpec) -> Iterator[Typed]:
    """Every well-typed ``(term, type)`` within the bounds, exactly once."""
    if not spec.typed:
        raise ValueError("gen_typed_terms needs a typed corpus spec")
    ctx = tuple(spec.context)
    for k in range(spec.height_bound + 1):
        for t, ty in _tlevel(ctx, k, spec.calculus, spec.type_height):
            if spec.target_type is None or ty == spec.target_type:
                yield t, ty


def corpus_terms(corpus: Union[CorpusSpec, Iterable]) -> Iterator:
    if isinstance(corpus, CorpusSpec):
        if corpus.typed:
            return (t for t, _ in gen_typed_terms(corpus))
        return gen_terms(corpus)
    return iter(corpus)


# -- inequality and non-joinability --------------------------------------------


@dataclass(frozen=True)
class DiffWitness:
    """Where two terms first disagree: ``path`` names fields from the root."""

    path: tuple[str, ...]
    kind: str

    def follow(self, t):
        for name in self.path:
            t = getattr(t, name)
        return t


def _kind(x) -> str:
    return type(x).__name__.lower()


def diff(m, n) -> Optional[DiffWitness]:
    """``None`` when the terms are structurally equal, otherwise the first
    disagreement, preferring the function side of applications."""
    if m == n:
        return None
    path: list[str] = []
    while True:
        if type(m) is not type(n):
            return DiffWitness(tuple(path), f"{_kind(m)}-vs-{_kind(n)}")
        for f in dataclasses.fields(m):
            if not f.compare:
                continue
            a, b = getattr(m, f.name), getattr(n, f.name)
            if a == b:
                continue
            if dataclasses.is_dataclass(a):
                path.append(f.name)
                m, n = a, b
                break
            return DiffWitness(tuple(path), f"{_kind(m)}-{f.name}")
        else:
            return None


def not_one_step_joinable(m1, m2, rel: Relation) -> bool:
    """The two terms differ and no single step on either side brings them together."""
    if diff(m1, m2) is None:
        return False
    r1, r2 = rel(m1), rel(m2)
    return m2 not in r1 and m1 not in r2 and set(r1).isdisjoint(r2)


def _diamond_cex_at(rel: Relation, m) -> Optional[Counterexample]:
    rs = rel(m)
    for i, m1 in enumerate(rs):
        for m2 in rs[i + 1:]:
            if not_one_step_joinable(m1, m2, rel):
                return Counterexample(m, m1, m2, (m, m1), (m, m2),
                                      "branches differ and have no common one-step reduct")
    return None


def find_diamond_cex(rel: Relation, spec: Union[CorpusSpec, Iterable],
                     threads: Optional[int] = None) -> Optional[Counterexample]:
    """First peak in corpus order whose one-step branches cannot be closed in
    one step; ``None`` when the whole corpus closes."""
    for hit in ordered_map(lambda m: _diamond_cex_at(rel, m), corpus_terms(spec), threads):
        if hit is not None:
            return hit
    return None


def find_typed_eta_diamond_cex(spec: CorpusSpec, rules: Sequence[str] = sf.ETA_RULES,
                               threads: Optional[int] = None) -> Optional[Counterexample]:
    if not spec.typed:
        raise ValueError("typed search needs a typed corpus spec")
    rel = sf.typed_relation("typed-eta-ext", spec.context, rules)
    return find_diamond_cex(rel, spec, threads)


def clear_caches() -> None:
    for fn in (_level, _upto, _type_level, _types_upto, _tlevel, _tupto):
        fn.cache_clear()
