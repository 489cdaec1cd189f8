"""Nameless untyped lambda terms.

Bound variables are 0-based binder distances, so alpha-equivalent terms are
structurally equal. A naming context maps free index ``i`` to ``ctx[i]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

__all__ = [
    "Var", "Lam", "App", "Term",
    "TermSyntaxError", "UnboundName", "IndexOutOfRange", "NegativeIndex", "OccursCheckFailed",
    "parse", "pretty", "shift", "subst", "occurs", "strengthen",
    "size", "height", "free_indices", "to_json", "from_json",
]


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __repr__(self) -> str:
        return f"Var({self.index})"


@dataclass(frozen=True, slots=True)
class Lam:
    body: Term
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("lam", self.body)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Lam({self.body!r})"


@dataclass(frozen=True, slots=True)
class App:
    fun: Term
    arg: Term
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("app", self.fun, self.arg)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"App({self.fun!r}, {self.arg!r})"


Term = Union[Var, Lam, App]


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundName(ValueError):
    def __init__(self, name: str):
        super().__init__(f"unbound name {name!r}")
        self.name = name


class IndexOutOfRange(ValueError):
    pass


class NegativeIndex(ValueError):
    pass


class OccursCheckFailed(ValueError):
    pass


# -- index manipulation -------------------------------------------------------


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Add ``amount`` to every free index >= ``cutoff``."""
    if amount == 0:
        return t
    match t:
        case Var(i):
            if i < cutoff:
                return t
            if i + amount < 0:
                raise NegativeIndex(f"shifting index {i} by {amount}")
            return Var(i + amount)
        case Lam(b):
            return Lam(shift(b, amount, cutoff + 1))
        case App(f, a):
            return App(shift(f, amount, cutoff), shift(a, amount, cutoff))
    raise TypeError(f"not a term: {t!r}")


def subst(t: Term, j: int, s: Term) -> Term:
    """Replace free index ``j`` of ``t`` by ``s`` and close the gap.

    ``s`` lives in the context of ``t`` with index ``j`` removed, so indices
    above ``j`` drop by one and ``s`` is shifted under every binder crossed.
    ``subst(b, 0, a)`` is the contractum of the redex ``(\\. b) a``.
    """

    def go(u: Term, depth: int) -> Term:
        match u:
            case Var(i):
                if i < depth + j:
                    return u
                if i == depth + j:
                    return shift(s, depth, 0)
                return Var(i - 1)
            case Lam(b):
                return Lam(go(b, depth + 1))
            case App(f, a):
                return App(go(f, depth), go(a, depth))
        raise TypeError(f"not a term: {u!r}")

    return go(t, 0)


def occurs(t: Term, j: int) -> bool:
    match t:
        case Var(i):
            return i == j
        case Lam(b):
            return occurs(b, j + 1)
        case App(f, a):
            return occurs(f, j) or occurs(a, j)
    raise TypeError(f"not a term: {t!r}")


def strengthen(t: Term, j: int) -> Term:
    """Drop the unused free index ``j``; indices above it move down by one."""
    if occurs(t, j):
        raise OccursCheckFailed(f"index {j} occurs in {t!r}")

    def go(u: Term, depth: int) -> Term:
        match u:
            case Var(i):
                return Var(i - 1) if i > depth + j else u
            case Lam(b):
                return Lam(go(b, depth + 1))
            case App(f, a):
                return App(go(f, depth), go(a, depth))
        raise TypeError(f"not a term: {u!r}")

    return go(t, 0)


def size(t: Term) -> int:
    match t:
        case Var():
            return 1
        case Lam(b):
            return 1 + size(b)
        case App(f, a):
            return 1 + size(f) + size(a)
    raise TypeError(f"not a term: {t!r}")


def height(t: Term) -> int:
    match t:
        case Var():
            return 0
        case Lam(b):
            return 1 + height(b)
        case App(f, a):
            return 1 + max(height(f), height(a))
    raise TypeError(f"not a term: {t!r}")


def free_indices(t: Term, depth: int = 0) -> frozenset[int]:
    match t:
        case Var(i):
            return frozenset([i - depth]) if i >= depth else frozenset()
        case Lam(b):
            return free_indices(b, depth + 1)
        case App(f, a):
            return free_indices(f, depth) | free_indices(a, depth)
    raise TypeError(f"not a term: {t!r}")


# -- concrete syntax ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\))|(?P<name>[a-zA-Z][a-zA-Z0-9_']*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise TermSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
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
            found = repr(text) if text else "end of input"
            raise TermSyntaxError(f"expected {kind}, found {found}", pos)
        self.i += 1
        return text

    def term(self, scope: list[str]) -> Term:
        if self.peek() == "lam":
            return self.lam(scope)
        return self.app(scope)

    def lam(self, scope: list[str]) -> Term:
        self.take("lam")
        name = self.take("name")
        self.take("dot")
        return Lam(self.term([name, *scope]))

    def app(self, scope: list[str]) -> Term:
        t = self.atom(scope)
        while self.peek() in ("name", "lp", "lam"):
            if self.peek() == "lam":
                # a trailing lambda argument swallows the rest
                return App(t, self.lam(scope))
            t = App(t, self.atom(scope))
        return t

    def atom(self, scope: list[str]) -> Term:
        if self.peek() == "lp":
            self.take("lp")
            t = self.term(scope)
            self.take("rp")
            return t
        name = self.take("name")
        try:
            return Var(scope.index(name))
        except ValueError:
            raise UnboundName(name) from None


def parse(text: str, ctx: Sequence[str] = ()) -> Term:
    """Parse ``text``; free names resolve through ``ctx`` (``ctx[i]`` is index ``i``)."""
    p = _Parser(text)
    t = p.term(list(ctx))
    if p.peek() != "eof":
        _, tok, pos = p.tokens[p.i]
        raise TermSyntaxError(f"unexpected {tok!r}", pos)
    return t


def _name_supply() -> Iterator[str]:
    yield from ("x", "y", "z")
    n = 1
    while True:
        yield f"x{n}"
        n += 1


def fresh_name(taken: Sequence[str]) -> str:
    return next(n for n in _name_supply() if n not in taken)


def pretty(t: Term, ctx: Sequence[str] = ()) -> str:
    """Render ``t`` with binder names x, y, z, x1, ... avoiding names in scope."""

    def go(u: Term, scope: list[str]) -> str:
        match u:
            case Var(i):
                if i >= len(scope):
                    raise IndexOutOfRange(f"index {i} with {len(scope)} names in scope")
                return scope[i]
            case Lam(b):
                name = fresh_name(scope)
                return f"\\{name}. {go(b, [name, *scope])}"
            case App(f, a):
                left = go(f, scope)
                if isinstance(f, Lam):
                    left = f"({left})"
                right = go(a, scope)
                if not isinstance(a, Var):
                    right = f"({right})"
                return f"{left} {right}"
        raise TypeError(f"not a term: {u!r}")

    return go(t, list(ctx))


# -- JSON ---------------------------------------------------------------------


def to_json(t: Term) -> dict:
    match t:
        case Var(i):
            return {"var": i}
        case Lam(b):
            return {"lam": to_json(b)}
        case App(f, a):
            return {"app": [to_json(f), to_json(a)]}
    raise TypeError(f"not a term: {t!r}")


def from_json(data) -> Term:
    if not isinstance(data, dict) or len(data) != 1:
        raise ValueError(f"malformed term: {data!r}")
    (key, value), = data.items()
    if key == "var" and isinstance(value, int) and not isinstance(value, bool) and value >= 0:
        return Var(value)
    if key == "lam":
        return Lam(from_json(value))
    if key == "app" and isinstance(value, list) and len(value) == 2:
        return App(from_json(value[0]), from_json(value[1]))
    raise ValueError(f"malformed term: {data!r}")
