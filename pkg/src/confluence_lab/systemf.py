"""System F with explicit annotations, plus a Unit/product extension.

Term and type variables are nameless and live in separate index spaces.
A typing context is a tuple of :class:`TermBind` / :class:`TypeBind`
entries, outermost first; base types are simply type variables bound in
the context. Reduction functions take the context only to enforce that
every input typechecks before it is related to anything.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence, Union

from . import terms as ut
from .reduction import Relation, Step, dedup

# -- syntax -------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TVar:
    index: int


@dataclass(frozen=True, slots=True)
class Arr:
    dom: Ty
    cod: Ty


@dataclass(frozen=True, slots=True)
class All:
    body: Ty


@dataclass(frozen=True, slots=True)
class Unit:
    pass


@dataclass(frozen=True, slots=True)
class Prod:
    left: Ty
    right: Ty


Ty = Union[TVar, Arr, All, Unit, Prod]


@dataclass(frozen=True, slots=True)
class TmVar:
    index: int


@dataclass(frozen=True, slots=True)
class TmLam:
    annot: Ty
    body: TTerm


@dataclass(frozen=True, slots=True)
class TmApp:
    fun: TTerm
    arg: TTerm


@dataclass(frozen=True, slots=True)
class TmTLam:
    body: TTerm


@dataclass(frozen=True, slots=True)
class TmTApp:
    fun: TTerm
    tyarg: Ty


@dataclass(frozen=True, slots=True)
class TmUnit:
    pass


@dataclass(frozen=True, slots=True)
class TmPair:
    left: TTerm
    right: TTerm


@dataclass(frozen=True, slots=True)
class TmFst:
    pair: TTerm


@dataclass(frozen=True, slots=True)
class TmSnd:
    pair: TTerm


TTerm = Union[TmVar, TmLam, TmApp, TmTLam, TmTApp, TmUnit, TmPair, TmFst, TmSnd]


@dataclass(frozen=True, slots=True)
class TermBind:
    ty: Ty
    name: str = "x"


@dataclass(frozen=True, slots=True)
class TypeBind:
    name: str = "a"


TyCtx = tuple  # of TermBind | TypeBind, outermost first


class TypeCheckError(Exception):
    def __init__(self, message: str, location: tuple = (), expected=None, found=None):
        super().__init__(message)
        self.location = location
        self.expected = expected
        self.found = found


class UnboundVariable(TypeCheckError):
    pass


class IllTypedInput(ValueError):
    pass


# -- types --------------------------------------------------------------------


def ty_shift(a: Ty, amount: int, cutoff: int = 0) -> Ty:
    if amount == 0:
        return a
    match a:
        case TVar(i):
            if i < cutoff:
                return a
            if i + amount < 0:
                raise ut.NegativeIndex(f"shifting type index {i} by {amount}")
            return TVar(i + amount)
        case Arr(d, c):
            return Arr(ty_shift(d, amount, cutoff), ty_shift(c, amount, cutoff))
        case All(b):
            return All(ty_shift(b, amount, cutoff + 1))
        case Unit():
            return a
        case Prod(l, r):
            return Prod(ty_shift(l, amount, cutoff), ty_shift(r, amount, cutoff))
    raise TypeError(f"not a type: {a!r}")


def ty_subst(a: Ty, j: int, b: Ty) -> Ty:
    """Type-level counterpart of :func:`confluence_lab.terms.subst`."""

    def go(u: Ty, depth: int) -> Ty:
        match u:
            case TVar(i):
                if i < depth + j:
                    return u
                if i == depth + j:
                    return ty_shift(b, depth, 0)
                return TVar(i - 1)
            case Arr(d, c):
                return Arr(go(d, depth), go(c, depth))
            case All(body):
                return All(go(body, depth + 1))
            case Unit():
                return u
            case Prod(l, r):
                return Prod(go(l, depth), go(r, depth))
        raise TypeError(f"not a type: {u!r}")

    return go(a, 0)


def ty_height(a: Ty) -> int:
    match a:
        case TVar() | Unit():
            return 0
        case Arr(d, c):
            return 1 + max(ty_height(d), ty_height(c))
        case All(b):
            return 1 + ty_height(b)
        case Prod(l, r):
            return 1 + max(ty_height(l), ty_height(r))
    raise TypeError(f"not a type: {a!r}")


def _ty_free_ok(a: Ty, ntv: int) -> bool:
    match a:
        case TVar(i):
            return i < ntv
        case Arr(d, c):
            return _ty_free_ok(d, ntv) and _ty_free_ok(c, ntv)
        case All(b):
            return _ty_free_ok(b, ntv + 1)
        case Unit():
            return True
        case Prod(l, r):
            return _ty_free_ok(l, ntv) and _ty_free_ok(r, ntv)
    raise TypeError(f"not a type: {a!r}")


# -- term index manipulation ---------------------------------------------------


def tm_shift(t: TTerm, amount: int, cutoff: int = 0) -> TTerm:
    """Shift free term variables; type binders do not count."""
    if amount == 0:
        return t
    match t:
        case TmVar(i):
            if i < cutoff:
                return t
            if i + amount < 0:
                raise ut.NegativeIndex(f"shifting index {i} by {amount}")
            return TmVar(i + amount)
        case TmLam(a, b):
            return TmLam(a, tm_shift(b, amount, cutoff + 1))
        case TmTLam(b):
            return TmTLam(tm_shift(b, amount, cutoff))
        case TmTApp(f, a):
            return TmTApp(tm_shift(f, amount, cutoff), a)
    return _map_children(t, lambda c: tm_shift(c, amount, cutoff))


def tm_ty_shift(t: TTerm, amount: int, cutoff: int = 0) -> TTerm:
    """Shift free type variables occurring in annotations and type arguments."""
    if amount == 0:
        return t
    match t:
        case TmLam(a, b):
            return TmLam(ty_shift(a, amount, cutoff), tm_ty_shift(b, amount, cutoff))
        case TmTLam(b):
            return TmTLam(tm_ty_shift(b, amount, cutoff + 1))
        case TmTApp(f, a):
            return TmTApp(tm_ty_shift(f, amount, cutoff), ty_shift(a, amount, cutoff))
    return _map_children(t, lambda c: tm_ty_shift(c, amount, cutoff))


def _map_children(t: TTerm, fn) -> TTerm:
    match t:
        case TmVar() | TmUnit():
            return t
        case TmApp(f, a):
            return TmApp(fn(f), fn(a))
        case TmPair(l, r):
            return TmPair(fn(l), fn(r))
        case TmFst(p):
            return TmFst(fn(p))
        case TmSnd(p):
            return TmSnd(fn(p))
    raise TypeError(f"not a typed term: {t!r}")


def tm_subst(t: TTerm, j: int, s: TTerm) -> TTerm:
    """Substitute ``s`` for term variable ``j``; ``s`` is shifted across both
    term binders and type binders on the way down."""

    def go(u: TTerm, k: int, tl: int) -> TTerm:
        match u:
            case TmVar(i):
                if i < k + j:
                    return u
                if i == k + j:
                    return tm_ty_shift(tm_shift(s, k, 0), tl, 0)
                return TmVar(i - 1)
            case TmLam(a, b):
                return TmLam(a, go(b, k + 1, tl))
            case TmTLam(b):
                return TmTLam(go(b, k, tl + 1))
            case TmTApp(f, a):
                return TmTApp(go(f, k, tl), a)
        return _map_children(u, lambda c: go(c, k, tl))

    return go(t, 0, 0)


def tm_ty_subst(t: TTerm, j: int, b: Ty) -> TTerm:
    """Substitute type ``b`` for type variable ``j`` throughout ``t``."""

    def go(u: TTerm, tl: int) -> TTerm:
        match u:
            case TmLam(a, body):
                return TmLam(ty_subst(a, j + tl, ty_shift(b, tl, 0)), go(body, tl))
            case TmTLam(body):
                return TmTLam(go(body, tl + 1))
            case TmTApp(f, a):
                return TmTApp(go(f, tl), ty_subst(a, j + tl, ty_shift(b, tl, 0)))
        return _map_children(u, lambda c: go(c, tl))

    return go(t, 0)


def tm_occurs(t: TTerm, j: int) -> bool:
    match t:
        case TmVar(i):
            return i == j
        case TmUnit():
            return False
        case TmLam(_, b):
            return tm_occurs(b, j + 1)
        case TmTLam(b):
            return tm_occurs(b, j)
        case TmTApp(f, _):
            return tm_occurs(f, j)
        case TmApp(a, b) | TmPair(a, b):
            return tm_occurs(a, j) or tm_occurs(b, j)
        case TmFst(p) | TmSnd(p):
            return tm_occurs(p, j)
    raise TypeError(f"not a typed term: {t!r}")


def tm_strengthen(t: TTerm, j: int) -> TTerm:
    if tm_occurs(t, j):
        raise ut.OccursCheckFailed(f"term index {j} occurs in {t!r}")
    return tm_subst(t, j, TmUnit())


def tm_height(t: TTerm) -> int:
    match t:
        case TmVar() | TmUnit():
            return 0
        case TmLam(_, b) | TmTLam(b) | TmTApp(b, _) | TmFst(b) | TmSnd(b):
            return 1 + tm_height(b)
        case TmApp(a, b) | TmPair(a, b):
            return 1 + max(tm_height(a), tm_height(b))
    raise TypeError(f"not a typed term: {t!r}")


def tm_size(t: TTerm) -> int:
    match t:
        case TmVar() | TmUnit():
            return 1
        case TmLam(_, b) | TmTLam(b) | TmTApp(b, _) | TmFst(b) | TmSnd(b):
            return 1 + tm_size(b)
        case TmApp(a, b) | TmPair(a, b):
            return 1 + tm_size(a) + tm_size(b)
    raise TypeError(f"not a typed term: {t!r}")


# -- typing -------------------------------------------------------------------


def type_var_count(ctx: TyCtx) -> int:
    return sum(isinstance(e, TypeBind) for e in ctx)


def lookup(ctx: TyCtx, index: int) -> Optional[Ty]:
    """Type of term variable ``index``, adjusted for type binders added after it."""
    seen_types = 0
    k = index
    for entry in reversed(ctx):
        if isinstance(entry, TypeBind):
            seen_types += 1
        elif k == 0:
            return ty_shift(entry.ty, seen_types, 0)
        else:
            k -= 1
    return None


@lru_cache(maxsize=None)
def typecheck(ctx: TyCtx, t: TTerm) -> Ty:
    return _infer(ctx, t, ())


def _infer(ctx: TyCtx, t: TTerm, loc: tuple) -> Ty:
    match t:
        case TmVar(i):
            ty = lookup(ctx, i)
            if ty is None:
                raise UnboundVariable(f"unbound term variable {i}", loc)
            return ty
        case TmUnit():
            return Unit()
        case TmLam(a, b):
            if not _ty_free_ok(a, type_var_count(ctx)):
                raise TypeCheckError("annotation mentions an unbound type variable", loc, found=a)
            return Arr(a, _infer((*ctx, TermBind(a)), b, (*loc, 0)))
        case TmApp(f, a):
            fty = _infer(ctx, f, (*loc, 0))
            aty = _infer(ctx, a, (*loc, 1))
            if not isinstance(fty, Arr):
                raise TypeCheckError("applying a non-function", (*loc, 0), expected="function type", found=fty)
            if fty.dom != aty:
                raise TypeCheckError("argument type mismatch", (*loc, 1), expected=fty.dom, found=aty)
            return fty.cod
        case TmTLam(b):
            return All(_infer((*ctx, TypeBind()), b, (*loc, 0)))
        case TmTApp(f, b):
            if not _ty_free_ok(b, type_var_count(ctx)):
                raise TypeCheckError("type argument mentions an unbound type variable", loc, found=b)
            fty = _infer(ctx, f, (*loc, 0))
            if not isinstance(fty, All):
                raise TypeCheckError("type application of a non-polymorphic term", (*loc, 0),
                                     expected="forall type", found=fty)
            return ty_subst(fty.body, 0, b)
        case TmPair(l, r):
            return Prod(_infer(ctx, l, (*loc, 0)), _infer(ctx, r, (*loc, 1)))
        case TmFst(p) | TmSnd(p):
            pty = _infer(ctx, p, (*loc, 0))
            if not isinstance(pty, Prod):
                raise TypeCheckError("projection from a non-pair", (*loc, 0), expected="product type", found=pty)
            return pty.left if isinstance(t, TmFst) else pty.right
    raise TypeError(f"not a typed term: {t!r}")


def _admit(ctx: TyCtx, m: TTerm) -> Ty:
    try:
        return typecheck(ctx, m)
    except TypeCheckError as e:
        raise IllTypedInput(str(e)) from e


# -- reduction ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _tbeta_steps(m: TTerm) -> tuple[Step, ...]:
    out: list[Step] = []
    match m:
        case TmApp(TmLam(_, b), a):
            out.append(((), tm_subst(b, 0, a)))
        case TmTApp(TmTLam(b), a):
            out.append(((), tm_ty_subst(b, 0, a)))
    for i, child, rebuild in _children(m):
        out.extend(((i, *p), rebuild(r)) for p, r in _tbeta_steps(child))
    return tuple(out)


def _children(m: TTerm):
    """(selector, child, rebuild) for each term-valued child."""
    match m:
        case TmVar() | TmUnit():
            return ()
        case TmLam(a, b):
            return ((0, b, lambda x: TmLam(a, x)),)
        case TmTLam(b):
            return ((0, b, TmTLam),)
        case TmTApp(f, a):
            return ((0, f, lambda x: TmTApp(x, a)),)
        case TmApp(f, a):
            return ((0, f, lambda x: TmApp(x, a)), (1, a, lambda x: TmApp(f, x)))
        case TmPair(l, r):
            return ((0, l, lambda x: TmPair(x, r)), (1, r, lambda x: TmPair(l, x)))
        case TmFst(p):
            return ((0, p, TmFst),)
        case TmSnd(p):
            return ((0, p, TmSnd),)
    raise TypeError(f"not a typed term: {m!r}")


def typed_beta_reducts(ctx: TyCtx, m: TTerm) -> tuple[TTerm, ...]:
    """One-step beta and type-beta reducts, outermost-leftmost first."""
    _admit(ctx, m)
    return dedup(r for _, r in _tbeta_steps(m))


@lru_cache(maxsize=None)
def _tpar(m: TTerm) -> tuple[TTerm, ...]:
    match m:
        case TmVar() | TmUnit():
            return (m,)
        case TmLam(a, b):
            return tuple(TmLam(a, b2) for b2 in _tpar(b))
        case TmTLam(b):
            return tuple(TmTLam(b2) for b2 in _tpar(b))
        case TmApp(f, a):
            args = _tpar(a)
            out = [TmApp(f2, a2) for f2, a2 in product(_tpar(f), args)]
            if isinstance(f, TmLam):
                out.extend(tm_subst(b2, 0, a2) for b2, a2 in product(_tpar(f.body), args))
            return dedup(out)
        case TmTApp(f, a):
            out = [TmTApp(f2, a) for f2 in _tpar(f)]
            if isinstance(f, TmTLam):
                out.extend(tm_ty_subst(b2, 0, a) for b2 in _tpar(f.body))
            return dedup(out)
        case TmPair(l, r):
            return tuple(TmPair(l2, r2) for l2, r2 in product(_tpar(l), _tpar(r)))
        case TmFst(p):
            return tuple(TmFst(p2) for p2 in _tpar(p))
        case TmSnd(p):
            return tuple(TmSnd(p2) for p2 in _tpar(p))
    raise TypeError(f"not a typed term: {m!r}")


def typed_par_reducts(ctx: TyCtx, m: TTerm) -> tuple[TTerm, ...]:
    """Parallel reducts under the rules lm/ap/beta/tlm/tap/tbeta (congruence on
    the product constructors). The first entry is ``m``."""
    _admit(ctx, m)
    return _tpar(m)


@lru_cache(maxsize=None)
def _tcd(m: TTerm) -> TTerm:
    match m:
        case TmApp(TmLam(_, b), a):
            return tm_subst(_tcd(b), 0, _tcd(a))
        case TmTApp(TmTLam(b), a):
            return tm_ty_subst(_tcd(b), 0, a)
        case TmVar() | TmUnit():
            return m
        case TmLam(a, b):
            return TmLam(a, _tcd(b))
        case TmTLam(b):
            return TmTLam(_tcd(b))
        case TmTApp(f, a):
            return TmTApp(_tcd(f), a)
    return _map_children(m, _tcd)


def typed_complete_dev(ctx: TyCtx, m: TTerm) -> TTerm:
    _admit(ctx, m)
    return _tcd(m)


ETA_RULES = ("fun", "sp", "unit")


@lru_cache(maxsize=None)
def _eta_ext_steps(ctx: TyCtx, m: TTerm, rules: tuple[str, ...]) -> tuple[Step, ...]:
    out: list[Step] = []
    if "fun" in rules:
        match m:
            case TmLam(_, TmApp(f, TmVar(0))) if not tm_occurs(f, 0):
                out.append(((), tm_strengthen(f, 0)))
    if "sp" in rules:
        match m:
            case TmPair(TmFst(p), TmSnd(q)) if p == q:
                out.append(((), p))
    if "unit" in rules and m != TmUnit() and typecheck(ctx, m) == Unit():
        out.append(((), TmUnit()))
    match m:
        case TmLam(a, _):
            inner = (*ctx, TermBind(a))
        case TmTLam():
            inner = (*ctx, TypeBind())
        case _:
            inner = ctx
    for i, child, rebuild in _children(m):
        out.extend(((i, *p), rebuild(r)) for p, r in _eta_ext_steps(inner, child, rules))
    return tuple(out)


def typed_eta_reducts_ext(ctx: TyCtx, m: TTerm, rules: Sequence[str] = ETA_RULES) -> tuple[TTerm, ...]:
    """One-step typed eta: function eta, surjective pairing and unit eta.

    Unit eta rewrites every Unit-typed subterm other than ``()`` itself.
    """
    _admit(ctx, m)
    return dedup(r for _, r in _eta_ext_steps(ctx, m, tuple(rules)))


def typed_relation(kind: str, ctx: TyCtx, rules: Sequence[str] = ETA_RULES) -> Relation:
    """A :class:`Relation` over terms well-typed in ``ctx``."""
    ctx = tuple(ctx)
    if kind == "typed-beta":
        return Relation(kind, lambda m: typed_beta_reducts(ctx, m))
    if kind == "typed-par":
        return Relation(kind, lambda m: typed_par_reducts(ctx, m))
    if kind == "typed-eta-ext":
        rules = tuple(rules)
        name = kind if rules == ETA_RULES else f"typed-eta[{','.join(rules)}]"
        return Relation(name, lambda m: typed_eta_reducts_ext(ctx, m, rules))
    raise ValueError(f"unknown typed relation {kind!r}")


def erase(t: TTerm) -> ut.Term:
    """Drop annotations and type abstractions/applications."""
    match t:
        case TmVar(i):
            return ut.Var(i)
        case TmLam(_, b):
            return ut.Lam(erase(b))
        case TmApp(f, a):
            return ut.App(erase(f), erase(a))
        case TmTLam(b) | TmTApp(b, _):
            return erase(b)
    raise ValueError(f"no untyped counterpart for {t!r}")


def clear_caches() -> None:
    for fn in (typecheck, _tbeta_steps, _tpar, _tcd, _eta_ext_steps):
        fn.cache_clear()


# -- concrete syntax ----------------------------------------------------------

_KEYWORDS = {"fst", "snd", "forall", "Unit"}
_TOKEN = re.compile(r"""\s*(?:
    (?P<tlam>/\\|Λ)|(?P<lam>\\|λ)|(?P<arrow>->)|(?P<unit>\(\s*\))|(?P<dot>\.)|(?P<colon>:)
    |(?P<lp>\()|(?P<rp>\))|(?P<lb>\[)|(?P<rb>\])|(?P<la><)|(?P<ra>>)|(?P<comma>,)|(?P<star>\*)
    |(?P<name>[a-zA-Z][a-zA-Z0-9_']*))""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ut.TermSyntaxError(f"unexpected character {text[start]!r}", start)
        group = m.lastgroup
        value = m.group(group)
        kind = value if group == "name" and value in _KEYWORDS else group
        tokens.append((kind, value, m.start(group)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str) -> str:
        k, text, pos = self.tokens[self.i]
        if k != kind:
            raise ut.TermSyntaxError(f"expected {kind}, found {text or 'end of input'!r}", pos)
        self.i += 1
        return text

    def done(self) -> None:
        if self.peek() != "eof":
            _, text, pos = self.tokens[self.i]
            raise ut.TermSyntaxError(f"unexpected {text!r}", pos)

    # types: forall binds loosest, then ->, then *
    def ty(self, tys: list[str]) -> Ty:
        if self.peek() == "forall":
            self.take("forall")
            name = self.take("name")
            self.take("dot")
            return All(self.ty([name, *tys]))
        left = self.prod(tys)
        if self.peek() == "arrow":
            self.take("arrow")
            return Arr(left, self.ty(tys))
        return left

    def prod(self, tys: list[str]) -> Ty:
        t = self.ty_atom(tys)
        while self.peek() == "star":
            self.take("star")
            t = Prod(t, self.ty_atom(tys))
        return t

    def ty_atom(self, tys: list[str]) -> Ty:
        if self.peek() == "Unit":
            self.take("Unit")
            return Unit()
        if self.peek() == "lp":
            self.take("lp")
            t = self.ty(tys)
            self.take("rp")
            return t
        name = self.take("name")
        if name not in tys:
            raise ut.UnboundName(name)
        return TVar(tys.index(name))

    def term(self, tms: list[str], tys: list[str]) -> TTerm:
        if self.peek() == "lam":
            self.take("lam")
            name = self.take("name")
            self.take("colon")
            annot = self.ty(tys)
            self.take("dot")
            return TmLam(annot, self.term([name, *tms], tys))
        if self.peek() == "tlam":
            self.take("tlam")
            name = self.take("name")
            self.take("dot")
            return TmTLam(self.term(tms, [name, *tys]))
        return self.app(tms, tys)

    def app(self, tms: list[str], tys: list[str]) -> TTerm:
        if self.peek() in ("fst", "snd"):
            ctor = TmFst if self.take(self.peek()) == "fst" else TmSnd
            t = ctor(self.atom(tms, tys))
        else:
            t = self.atom(tms, tys)
        while self.peek() in ("name", "lp", "unit", "la", "lb", "lam", "tlam"):
            if self.peek() == "lb":
                self.take("lb")
                t = TmTApp(t, self.ty(tys))
                self.take("rb")
            elif self.peek() in ("lam", "tlam"):
                return TmApp(t, self.term(tms, tys))
            else:
                t = TmApp(t, self.atom(tms, tys))
        return t

    def atom(self, tms: list[str], tys: list[str]) -> TTerm:
        kind = self.peek()
        if kind == "unit":
            self.take("unit")
            return TmUnit()
        if kind == "lp":
            self.take("lp")
            t = self.term(tms, tys)
            self.take("rp")
            return t
        if kind == "la":
            self.take("la")
            left = self.term(tms, tys)
            self.take("comma")
            right = self.term(tms, tys)
            self.take("ra")
            return TmPair(left, right)
        name = self.take("name")
        if name not in tms:
            raise ut.UnboundName(name)
        return TmVar(tms.index(name))


def _scopes(ctx: TyCtx) -> tuple[list[str], list[str]]:
    tms = [e.name for e in reversed(ctx) if isinstance(e, TermBind)]
    tys = [e.name for e in reversed(ctx) if isinstance(e, TypeBind)]
    return tms, tys


def parse_type(text: str, ctx: TyCtx = ()) -> Ty:
    p = _Parser(text)
    t = p.ty(_scopes(ctx)[1])
    p.done()
    return t


def parse_tterm(text: str, ctx: TyCtx = ()) -> TTerm:
    p = _Parser(text)
    t = p.term(*_scopes(ctx))
    p.done()
    return t


def parse_tctx(text: str) -> TyCtx:
    """``"b, f:b->b, p:Unit*Unit"``: bare names bind base types, ``name:Type``
    binds a term variable. Entries are listed outermost first."""
    ctx: list = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        if ":" in item:
            name, ty_text = (s.strip() for s in item.split(":", 1))
            ctx.append(TermBind(parse_type(ty_text, tuple(ctx)), name))
        else:
            ctx.append(TypeBind(item))
    return tuple(ctx)


def _type_names() -> Iterator[str]:
    yield from ("a", "b", "c")
    n = 1
    while True:
        yield f"a{n}"
        n += 1


def pretty_type(a: Ty, ctx: TyCtx = ()) -> str:
    return _pretty_ty(a, _scopes(ctx)[1])


def _pretty_ty(a: Ty, tys: list[str]) -> str:
    def atomic(u: Ty) -> str:
        s = _pretty_ty(u, tys)
        return s if isinstance(u, (TVar, Unit)) else f"({s})"

    match a:
        case TVar(i):
            if i >= len(tys):
                raise ut.IndexOutOfRange(f"type index {i} with {len(tys)} names in scope")
            return tys[i]
        case Unit():
            return "Unit"
        case Arr(d, c):
            left = _pretty_ty(d, tys)
            if isinstance(d, (Arr, All)):
                left = f"({left})"
            return f"{left} -> {_pretty_ty(c, tys)}"
        case All(b):
            name = next(n for n in _type_names() if n not in tys)
            return f"forall {name}. {_pretty_ty(b, [name, *tys])}"
        case Prod(l, r):
            left = _pretty_ty(l, tys) if isinstance(l, (TVar, Unit, Prod)) else atomic(l)
            return f"{left} * {atomic(r)}"
    raise TypeError(f"not a type: {a!r}")


def pretty_tterm(t: TTerm, ctx: TyCtx = ()) -> str:
    tms, tys = _scopes(ctx)
    return _pretty_tm(t, tms, tys)


def _pretty_tm(t: TTerm, tms: list[str], tys: list[str]) -> str:
    def arg(u: TTerm) -> str:
        s = _pretty_tm(u, tms, tys)
        return s if isinstance(u, (TmVar, TmUnit, TmPair)) else f"({s})"

    match t:
        case TmVar(i):
            if i >= len(tms):
                raise ut.IndexOutOfRange(f"term index {i} with {len(tms)} names in scope")
            return tms[i]
        case TmUnit():
            return "()"
        case TmLam(a, b):
            name = ut.fresh_name(tms + tys)
            return f"\\{name}:{_pretty_ty(a, tys)}. {_pretty_tm(b, [name, *tms], tys)}"
        case TmTLam(b):
            name = next(n for n in _type_names() if n not in tys and n not in tms)
            return f"/\\{name}. {_pretty_tm(b, tms, [name, *tys])}"
        case TmApp(f, a):
            head = _pretty_tm(f, tms, tys)
            if isinstance(f, (TmLam, TmTLam)):
                head = f"({head})"
            return f"{head} {arg(a)}"
        case TmTApp(f, a):
            head = _pretty_tm(f, tms, tys)
            if isinstance(f, (TmLam, TmTLam)):
                head = f"({head})"
            return f"{head} [{_pretty_ty(a, tys)}]"
        case TmPair(l, r):
            return f"<{_pretty_tm(l, tms, tys)}, {_pretty_tm(r, tms, tys)}>"
        case TmFst(p):
            return f"fst {arg(p)}"
        case TmSnd(p):
            return f"snd {arg(p)}"
    raise TypeError(f"not a typed term: {t!r}")


# -- JSON ---------------------------------------------------------------------


def type_to_json(a: Ty) -> dict:
    match a:
        case TVar(i):
            return {"tvar": i}
        case Arr(d, c):
            return {"arr": [type_to_json(d), type_to_json(c)]}
        case All(b):
            return {"all": type_to_json(b)}
        case Unit():
            return {"unit_ty": []}
        case Prod(l, r):
            return {"prod": [type_to_json(l), type_to_json(r)]}
    raise TypeError(f"not a type: {a!r}")


def type_from_json(data) -> Ty:
    if isinstance(data, dict) and len(data) == 1:
        (key, v), = data.items()
        if key == "tvar" and isinstance(v, int) and v >= 0:
            return TVar(v)
        if key == "arr" and isinstance(v, list) and len(v) == 2:
            return Arr(type_from_json(v[0]), type_from_json(v[1]))
        if key == "all":
            return All(type_from_json(v))
        if key == "unit_ty":
            return Unit()
        if key == "prod" and isinstance(v, list) and len(v) == 2:
            return Prod(type_from_json(v[0]), type_from_json(v[1]))
    raise ValueError(f"malformed type: {data!r}")


def tterm_to_json(t: TTerm) -> dict:
    match t:
        case TmVar(i):
            return {"var": i}
        case TmLam(a, b):
            return {"lam": tterm_to_json(b), "annot": type_to_json(a)}
        case TmApp(f, a):
            return {"app": [tterm_to_json(f), tterm_to_json(a)]}
        case TmTLam(b):
            return {"tlam": tterm_to_json(b)}
        case TmTApp(f, a):
            return {"tapp": [tterm_to_json(f), type_to_json(a)]}
        case TmUnit():
            return {"unit": []}
        case TmPair(l, r):
            return {"pair": [tterm_to_json(l), tterm_to_json(r)]}
        case TmFst(p):
            return {"fst": tterm_to_json(p)}
        case TmSnd(p):
            return {"snd": tterm_to_json(p)}
    raise TypeError(f"not a typed term: {t!r}")


def tterm_from_json(data) -> TTerm:
    if not isinstance(data, dict):
        raise ValueError(f"malformed typed term: {data!r}")
    keys = set(data)
    if keys == {"lam", "annot"}:
        return TmLam(type_from_json(data["annot"]), tterm_from_json(data["lam"]))
    if len(data) == 1:
        (key, v), = data.items()
        if key == "var" and isinstance(v, int) and v >= 0:
            return TmVar(v)
        if key == "app" and isinstance(v, list) and len(v) == 2:
            return TmApp(tterm_from_json(v[0]), tterm_from_json(v[1]))
        if key == "tlam":
            return TmTLam(tterm_from_json(v))
        if key == "tapp" and isinstance(v, list) and len(v) == 2:
            return TmTApp(tterm_from_json(v[0]), type_from_json(v[1]))
        if key == "unit":
            return TmUnit()
        if key == "pair" and isinstance(v, list) and len(v) == 2:
            return TmPair(tterm_from_json(v[0]), tterm_from_json(v[1]))
        if key == "fst":
            return TmFst(tterm_from_json(v))
        if key == "snd":
            return TmSnd(tterm_from_json(v))
    raise ValueError(f"malformed typed term: {data!r}")


def tctx_to_json(ctx: TyCtx) -> list:
    return [{"term": e.name, "type": type_to_json(e.ty)} if isinstance(e, TermBind) else {"tyvar": e.name}
            for e in ctx]
