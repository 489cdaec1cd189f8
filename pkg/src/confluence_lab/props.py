"""Abstract-rewriting property checks over bounded corpora.

Every checker walks the corpus in generator order and reports the first
failing peak. Closing a diagram may need a bounded search; when that search
is cut short by its budget the instance is *inconclusive*, never a failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from . import systemf as sf
from . import terms as ut
from .generate import CorpusSpec, corpus_terms
from .reduction import Counterexample, Relation, reachable, joinable, Join, union_rel
from .workers import ordered_map

DEFAULT_DEPTH = 8
DEFAULT_NODES = 10_000

Corpus = Union[CorpusSpec, Iterable]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class PropertyReport:
    property: str
    relations: tuple[str, ...]
    corpus: dict
    outcome: str
    counterexample: Optional[Counterexample] = None
    instances_checked: int = 0
    inconclusive: list = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.outcome == PASS

    def to_json(self, encode=None) -> dict:
        encode = encode or encode_term
        out = {
            "property": self.property,
            "relations": list(self.relations),
            "corpus": self.corpus,
            "outcome": self.outcome,
            "instances_checked": self.instances_checked,
            "inconclusive_instances": len(self.inconclusive),
            "elapsed_ms": self.elapsed_ms,
        }
        if self.counterexample is not None:
            out["counterexample"] = counterexample_to_json(self.counterexample, encode)
        return out


def encode_term(t) -> dict:
    if isinstance(t, (ut.Var, ut.Lam, ut.App)):
        return ut.to_json(t)
    return sf.tterm_to_json(t)


def counterexample_to_json(cx: Counterexample, encode=None) -> dict:
    encode = encode or encode_term
    return {
        "peak": encode(cx.peak),
        "left": encode(cx.left),
        "right": encode(cx.right),
        "left_trace": {"steps": [encode(t) for t in cx.left_trace]},
        "right_trace": {"steps": [encode(t) for t in cx.right_trace]},
        "reason": cx.reason,
    }


def _describe(corpus: Corpus) -> tuple[dict, Iterable]:
    if isinstance(corpus, CorpusSpec):
        return corpus.to_json(), corpus_terms(corpus)
    items = list(corpus)
    return {"explicit": len(items)}, items


# an instance check returns None (closed), a Counterexample (failed) or a
# string describing why the search was cut short
Instance = Callable[[object], Union[None, Counterexample, str]]


def _run(prop: str, rels: tuple[Relation, ...], corpus: Corpus, instance: Instance,
         threads: Optional[int]) -> PropertyReport:
    start = time.perf_counter()
    desc, items = _describe(corpus)
    report = PropertyReport(prop, tuple(r.name for r in rels), desc, PASS)
    for m, result in ordered_map(lambda m: (m, instance(m)), items, threads):
        report.instances_checked += 1
        if isinstance(result, Counterexample):
            report.outcome = FAIL
            report.counterexample = result
            break
        if result is not None:
            report.inconclusive.append((m, result))
    if report.outcome == PASS and report.inconclusive:
        report.outcome = INCONCLUSIVE
    report.elapsed_ms = round((time.perf_counter() - start) * 1000)
    return report


def diamond_closes(rel: Relation, m1, m2) -> bool:
    """One-step closing of a peak's two branches.

    Equal branches, or one branch stepping to the other, close the square
    (same cases the one-step search treats as joinable).
    """
    if m1 == m2:
        return True
    r1, r2 = rel(m1), rel(m2)
    return m2 in r1 or m1 in r2 or not set(r1).isdisjoint(r2)


def check_diamond(rel: Relation, corpus: Corpus, threads: Optional[int] = None) -> PropertyReport:
    def instance(m):
        rs = rel(m)
        for m1 in rs:
            for m2 in rs:
                if not diamond_closes(rel, m1, m2):
                    return Counterexample(m, m1, m2, (m, m1), (m, m2), "no common one-step reduct")
        return None

    return _run("diamond", (rel,), corpus, instance, threads)


def check_strong_commutation(r: Relation, s: Relation, corpus: Corpus, depth_budget: int = DEFAULT_DEPTH,
                             node_budget: int = DEFAULT_NODES, threads: Optional[int] = None) -> PropertyReport:
    """An R-step and an S-step from one peak close by S* on the R side and
    by at most one R-step on the S side."""

    def instance(m):
        cut = None
        for m1 in r(m):
            for m2 in s(m):
                targets = {m2, *r(m2)}
                reach = reachable(m1, s, depth_budget, node_budget)
                if any(u in targets for u in reach.order):
                    continue
                if reach.complete:
                    return Counterexample(m, m1, m2, (m, m1), (m, m2),
                                          f"no {s.name}*-reduct of the left branch is a {r.name}=-reduct of the right")
                cut = cut or "closing search exhausted its budget"
        return cut

    return _run("strong-commutation", (r, s), corpus, instance, threads)


def _commutes_at(r: Relation, s: Relation, m, depth: int, nodes: int):
    left = reachable(m, r, depth, nodes)
    right = reachable(m, s, depth, nodes)
    cut = None
    for m1 in left.order:
        for m2 in right.order:
            if m1 == m2:
                continue
            x = reachable(m1, s, depth, nodes)
            y = reachable(m2, r, depth, nodes)
            if any(u in y for u in x.order):
                continue
            if x.complete and y.complete:
                return Counterexample(m, m1, m2, left.trace_to(m1), right.trace_to(m2),
                                      f"{s.name}*-closure of the left and {r.name}*-closure of the right are disjoint")
            cut = cut or "closing search exhausted its budget"
    return cut


def check_commutation(r: Relation, s: Relation, corpus: Corpus, depth_budget: int = DEFAULT_DEPTH,
                      node_budget: int = DEFAULT_NODES, threads: Optional[int] = None) -> PropertyReport:
    return _run("commutation", (r, s), corpus,
                lambda m: _commutes_at(r, s, m, depth_budget, node_budget), threads)


def check_confluence(rel: Relation, corpus: Corpus, depth_budget: int = DEFAULT_DEPTH,
                     node_budget: int = DEFAULT_NODES, threads: Optional[int] = None) -> PropertyReport:
    """Confluence is commutation of a relation with itself."""
    return _run("confluence", (rel,), corpus,
                lambda m: _commutes_at(rel, rel, m, depth_budget, node_budget), threads)


def check_strip(rel: Relation, corpus: Corpus, depth_budget: int = DEFAULT_DEPTH,
                node_budget: int = DEFAULT_NODES, threads: Optional[int] = None) -> PropertyReport:
    """One step against many steps from the same peak must be joinable."""

    def instance(m):
        many = reachable(m, rel, depth_budget, node_budget)
        cut = None
        for m1 in rel(m):
            for m2 in many.order:
                j = joinable(m1, m2, rel, depth_budget, node_budget)
                if isinstance(j, Join):
                    continue
                if j.closures_complete:
                    return Counterexample(m, m1, m2, (m, m1), many.trace_to(m2), "branches have no common reduct")
                cut = cut or "closing search exhausted its budget"
        return cut

    return _run("strip", (rel,), corpus, instance, threads)


def commutative_union_pipeline(r: Relation, s: Relation, corpus: Corpus, depth_budget: int = DEFAULT_DEPTH,
                               node_budget: int = DEFAULT_NODES,
                               threads: Optional[int] = None) -> dict[str, PropertyReport]:
    """Check each hypothesis of the commutative-union argument and its
    conclusion on the same corpus. Nothing is inferred from the hypotheses:
    the union is checked directly."""
    if isinstance(corpus, CorpusSpec):
        items = corpus
    else:
        items = list(corpus)
    args = (depth_budget, node_budget, threads)
    return {
        f"confluence({r.name})": check_confluence(r, items, *args),
        f"confluence({s.name})": check_confluence(s, items, *args),
        f"strong-commutation({r.name},{s.name})": check_strong_commutation(r, s, items, *args),
        f"commutation({r.name},{s.name})": check_commutation(r, s, items, *args),
        f"confluence({r.name}+{s.name})": check_confluence(union_rel(r, s), items, *args),
    }


# -- re-validation ---------------------------------------------------------------


def _valid_trace(trace, rel: Relation) -> bool:
    return len(trace) >= 1 and all(b in rel(a) for a, b in zip(trace, trace[1:]))


def recheck(report: PropertyReport, rels: tuple[Relation, ...], depth_budget: int = DEFAULT_DEPTH,
            node_budget: int = DEFAULT_NODES) -> bool:
    """Independently confirm a failing report: the traces are genuine and the
    closing condition fails under a fresh search."""
    cx = report.counterexample
    if report.outcome != FAIL or cx is None:
        return False
    r = rels[0]
    s = rels[1] if len(rels) > 1 else r
    if cx.left_trace[0] != cx.peak or cx.right_trace[0] != cx.peak:
        return False
    if cx.left_trace[-1] != cx.left or cx.right_trace[-1] != cx.right:
        return False
    if not (_valid_trace(cx.left_trace, r) and _valid_trace(cx.right_trace, s)):
        return False
    if report.property == "diamond":
        return len(cx.left_trace) == 2 == len(cx.right_trace) and not diamond_closes(r, cx.left, cx.right)
    if report.property == "strong-commutation":
        targets = {cx.right, *r(cx.right)}
        reach = _closure(cx.left, s, depth_budget, node_budget)
        return reach is not None and targets.isdisjoint(reach)
    if report.property in ("commutation", "confluence"):
        x = _closure(cx.left, s, depth_budget, node_budget)
        y = _closure(cx.right, r, depth_budget, node_budget)
        return x is not None and y is not None and x.isdisjoint(y)
    if report.property == "strip":
        if not _valid_trace(cx.left_trace, r) or len(cx.left_trace) != 2:
            return False
        x = _closure(cx.left, r, depth_budget, node_budget)
        y = _closure(cx.right, r, depth_budget, node_budget)
        return x is not None and y is not None and x.isdisjoint(y)
    return False


def _closure(t, rel: Relation, depth: int, nodes: int) -> Optional[set]:
    """Whole reflexive-transitive closure by level-wise expansion, or None
    when it does not fit in the budgets."""
    seen = {t}
    level = [t]
    for _ in range(depth):
        nxt = [v for u in level for v in rel(u) if v not in seen]
        nxt = list(dict.fromkeys(nxt))
        if not nxt:
            return seen
        seen.update(nxt)
        if len(seen) > nodes:
            return None
        level = nxt
    return seen if all(v in seen for u in level for v in rel(u)) else None
