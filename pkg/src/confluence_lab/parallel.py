"""Parallel reduction and Takahashi's complete development."""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .reduction import Relation, dedup
from .terms import App, Lam, Term, Var, subst


class PreconditionViolated(ValueError):
    pass


@lru_cache(maxsize=None)
def par_reducts(m: Term) -> tuple[Term, ...]:
    """All ``n`` with ``m => n``, built bottom-up from the subterm sets.

    The first entry is always ``m`` itself.
    """
    match m:
        case Var():
            return (m,)
        case Lam(b):
            return tuple(Lam(b2) for b2 in par_reducts(b))
        case App(f, a):
            fs, args = par_reducts(f), par_reducts(a)
            out = [App(f2, a2) for f2, a2 in product(fs, args)]
            if isinstance(f, Lam):
                out.extend(subst(b2, 0, a2) for b2, a2 in product(par_reducts(f.body), args))
            return dedup(out)
    raise TypeError(f"not a term: {m!r}")


PAR = Relation("par", par_reducts)


def _redex_count(m: Term) -> int:
    match m:
        case Var():
            return 0
        case Lam(b):
            return _redex_count(b)
        case App(f, a):
            return int(isinstance(f, Lam)) + _redex_count(f) + _redex_count(a)
    raise TypeError(f"not a term: {m!r}")


def _develop(m: Term, marks: list[bool]) -> Term:
    """Complete development of the redexes of ``m`` flagged in ``marks``
    (pre-order, consumed from the front)."""
    match m:
        case Var():
            return m
        case Lam(b):
            return Lam(_develop(b, marks))
        case App(Lam(b), a):
            contract = marks.pop(0)
            b2 = _develop(b, marks)
            a2 = _develop(a, marks)
            return subst(b2, 0, a2) if contract else App(Lam(b2), a2)
        case App(f, a):
            f2 = _develop(f, marks)
            return App(f2, _develop(a, marks))
    raise TypeError(f"not a term: {m!r}")


def _developments(m: Term):
    k = _redex_count(m)
    for marks in product((False, True), repeat=k):
        yield _develop(m, list(marks))


@lru_cache(maxsize=None)
def par_step_check(m: Term, n: Term) -> bool:
    """Decide ``m => n`` by recursion on both terms.

    Congruence cases are followed structurally; only under a contracted
    redex are the developments of its body and argument tried, each being
    the development of some subset of their redexes.
    """
    match m, n:
        case Var(), _:
            return m == n
        case Lam(b), Lam(b2):
            return par_step_check(b, b2)
        case Lam(), _:
            return False
        case App(f, a), _:
            if isinstance(n, App) and par_step_check(f, n.fun) and par_step_check(a, n.arg):
                return True
            if isinstance(f, Lam):
                args = dedup(_developments(a))
                return any(subst(b2, 0, a2) == n
                           for b2 in dedup(_developments(f.body)) for a2 in args)
            return False
    raise TypeError(f"not a term: {m!r}")


@lru_cache(maxsize=None)
def complete_dev(m: Term) -> Term:
    match m:
        case Var():
            return m
        case Lam(b):
            return Lam(complete_dev(b))
        case App(Lam(b), a):
            return subst(complete_dev(b), 0, complete_dev(a))
        case App(f, a):
            return App(complete_dev(f), complete_dev(a))
    raise TypeError(f"not a term: {m!r}")


def par_subst_check(m: Term, m2: Term, n: Term, n2: Term) -> bool:
    """``m => m2`` and ``n => n2`` imply ``m[0:=n] => m2[0:=n2]``."""
    if not par_step_check(m, m2):
        raise PreconditionViolated("first pair is not a parallel step")
    if not par_step_check(n, n2):
        raise PreconditionViolated("second pair is not a parallel step")
    return par_step_check(subst(m, 0, n), subst(m2, 0, n2))


def clear_caches() -> None:
    for fn in (par_reducts, par_step_check, complete_dev):
        fn.cache_clear()
