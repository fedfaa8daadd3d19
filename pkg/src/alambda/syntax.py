"""Raw terms of the algebraic lambda-calculus: representation, parsing, printing.

Terms are stored namelessly.  A ``Var`` holds either an ``int`` (a de Bruijn
index, 0 being the innermost binder) or a ``str`` (a free variable).  ``Lam``
keeps the binder name it was parsed with as a printing hint only; it takes
no part in equality, so ``==`` on raw terms is alpha-equivalence.

Application is printed in Krivine's style, ``(M)N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from .semiring import Coefficient, CoefficientError, SemiringId, parse_coefficient

__all__ = [
    "RawTerm",
    "Var",
    "Lam",
    "App",
    "Zero",
    "Sum",
    "Scale",
    "ParseError",
    "parse",
    "parse_pure",
    "show",
    "alpha_eq",
    "is_pure",
    "free_names",
    "size",
    "shift",
    "instantiate",
    "abstract",
    "subst",
    "subterm",
    "replace_at",
    "positions",
]

Name = Union[int, str]


class RawTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, eq=True, repr=False)
class Var(RawTerm):
    name: Name
    _h: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("v", self.name)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Lam(RawTerm):
    body: RawTerm
    hint: str = field(default="x", compare=False)
    _h: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("l", self.body._h)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Lam({self.body!r})"


@dataclass(frozen=True, eq=True, repr=False)
class App(RawTerm):
    fun: RawTerm
    arg: RawTerm
    _h: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("a", self.fun._h, self.arg._h)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Zero(RawTerm):
    _h: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash("0"))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return "Zero()"


@dataclass(frozen=True, eq=True, repr=False)
class Sum(RawTerm):
    left: RawTerm
    right: RawTerm
    _h: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("+", self.left._h, self.right._h)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Sum({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Scale(RawTerm):
    coeff: Coefficient
    body: RawTerm
    _h: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("*", self.coeff, self.body._h)))

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Scale({self.coeff}, {self.body!r})"


def alpha_eq(t: RawTerm, u: RawTerm) -> bool:
    return t == u


def is_pure(t: RawTerm) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, Lam):
        return is_pure(t.body)
    if isinstance(t, App):
        return is_pure(t.fun) and is_pure(t.arg)
    return False


def size(t: RawTerm) -> int:
    if isinstance(t, (Var, Zero)):
        return 1
    if isinstance(t, (Lam, Scale)):
        return 1 + size(t.body)
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    return 1 + size(t.left) + size(t.right)


def free_names(t: RawTerm) -> set[str]:
    out: set[str] = set()

    def go(t):
        if isinstance(t, Var):
            if isinstance(t.name, str):
                out.add(t.name)
        elif isinstance(t, (Lam, Scale)):
            go(t.body)
        elif isinstance(t, App):
            go(t.fun)
            go(t.arg)
        elif isinstance(t, Sum):
            go(t.left)
            go(t.right)

    go(t)
    return out


# -- de Bruijn machinery ------------------------------------------------------


def _map_vars(t: RawTerm, f: Callable[[Var, int], RawTerm], depth: int = 0) -> RawTerm:
    if isinstance(t, Var):
        return f(t, depth)
    if isinstance(t, Lam):
        return Lam(_map_vars(t.body, f, depth + 1), t.hint)
    if isinstance(t, App):
        return App(_map_vars(t.fun, f, depth), _map_vars(t.arg, f, depth))
    if isinstance(t, Sum):
        return Sum(_map_vars(t.left, f, depth), _map_vars(t.right, f, depth))
    if isinstance(t, Scale):
        return Scale(t.coeff, _map_vars(t.body, f, depth))
    return t


def shift(t: RawTerm, d: int, cutoff: int = 0) -> RawTerm:
    """Add ``d`` to every bound index that escapes ``cutoff`` binders."""
    if d == 0:
        return t

    def f(v, depth):
        if isinstance(v.name, int) and v.name >= cutoff + depth:
            return Var(v.name + d)
        return v

    return _map_vars(t, f)


def instantiate(t: RawTerm, j: int, r: RawTerm) -> RawTerm:
    """Replace index ``j`` of ``t`` by ``r`` and close the gap it leaves.

    ``r`` lives in the context outside the ``j`` innermost binders of ``t``;
    ``instantiate(body, 0, arg)`` is the contractum of ``(λ.body)arg``.
    """

    def f(v, depth):
        k = v.name
        if not isinstance(k, int):
            return v
        if k == j + depth:
            return shift(r, j + depth)
        if k > j + depth:
            return Var(k - 1)
        return v

    return _map_vars(t, f)


def abstract(t: RawTerm, x: str, j: int = 0) -> RawTerm:
    """Turn free name ``x`` into bound index ``j``, making room for it."""

    def f(v, depth):
        k = v.name
        if k == x:
            return Var(j + depth)
        if isinstance(k, int) and k >= j + depth:
            return Var(k + 1)
        return v

    return _map_vars(t, f)


def subst(t: RawTerm, x: str, r: RawTerm) -> RawTerm:
    """Capture-free substitution of ``r`` for the free name ``x``."""
    return instantiate(abstract(t, x), 0, r)


# -- positions ------------------------------------------------------------------
# A position is a tuple of child indices: 0 for a binder body or a function,
# 1 for an argument; sums use 0/1 for left/right, scalings 0 for the body.


def _children(t: RawTerm) -> tuple[RawTerm, ...]:
    if isinstance(t, (Lam, Scale)):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Sum):
        return (t.left, t.right)
    return ()


def subterm(t: RawTerm, pos: tuple[int, ...]) -> RawTerm:
    for i in pos:
        t = _children(t)[i]
    return t


def replace_at(t: RawTerm, pos: tuple[int, ...], new: RawTerm) -> RawTerm:
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    if isinstance(t, Lam):
        return Lam(replace_at(t.body, rest, new), t.hint)
    if isinstance(t, Scale):
        return Scale(t.coeff, replace_at(t.body, rest, new))
    if isinstance(t, App):
        if i == 0:
            return App(replace_at(t.fun, rest, new), t.arg)
        return App(t.fun, replace_at(t.arg, rest, new))
    if isinstance(t, Sum):
        if i == 0:
            return Sum(replace_at(t.left, rest, new), t.right)
        return Sum(t.left, replace_at(t.right, rest, new))
    raise IndexError(f"no position {pos} in {t!r}")


def positions(t: RawTerm, prefix: tuple[int, ...] = (), depth: int = 0) -> Iterator[tuple[tuple[int, ...], int]]:
    """Pre-order walk yielding ``(position, binder depth)`` pairs."""
    yield prefix, depth
    inner = depth + 1 if isinstance(t, Lam) else depth
    for i, c in enumerate(_children(t)):
        yield from positions(c, prefix + (i,), inner)


# -- parsing --------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class _Tok:
    kind: str  # 'lam' 'dot' 'lp' 'rp' 'plus' 'slash' 'minus' 'num' 'id' 'eof'
    text: str
    line: int
    col: int


_PUNCT = {".": "dot", "(": "lp", ")": "rp", "+": "plus", "/": "slash", "-": "minus", "−": "minus",
          "λ": "lam", "\\": "lam"}


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if c in _PUNCT:
            toks.append(_Tok(_PUNCT[c], "-" if c == "−" else c, line, col))
            i, col = i + 1, col + 1
            continue
        j = i
        if c.isdigit():
            while j < n and text[j].isdigit():
                j += 1
            kind = "num"
        elif c.isascii() and (c.isalpha() or c == "_"):
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            kind = "id"
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
        toks.append(_Tok(kind, text[i:j], line, col))
        col += j - i
        i = j
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str, semiring: SemiringId):
        self.toks = _tokenize(text)
        self.i = 0
        self.semiring = semiring
        self.scope: list[str] = []

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.next()
        if t.kind != kind:
            what = t.text or "end of input"
            raise ParseError(f"expected {kind}, found {what!r}", t.line, t.col)
        return t

    def run(self) -> RawTerm:
        t = self.term()
        end = self.peek()
        if end.kind != "eof":
            raise ParseError(f"unexpected {end.text!r}", end.line, end.col)
        return t

    def term(self) -> RawTerm:
        t = self.scale()
        while self.peek().kind == "plus":
            self.next()
            t = Sum(t, self.scale())
        return t

    def _coeff_len(self) -> int:
        """Number of tokens of a coefficient literal followed by '.', else 0."""
        k0 = self.peek().kind
        if k0 == "num":
            if self.peek(1).kind == "dot":
                return 1
            if self.peek(1).kind == "slash" and self.peek(2).kind == "num" and self.peek(3).kind == "dot":
                return 3
        elif k0 == "minus":
            if self.peek(1).kind == "num" and self.peek(2).kind == "dot":
                return 2
        elif k0 == "id" and self.semiring is SemiringId.BOOL:
            if self.peek().text in ("T", "F") and self.peek(1).kind == "dot":
                return 1
        return 0

    def scale(self) -> RawTerm:
        n = self._coeff_len()
        if n:
            first = self.peek()
            lit = "".join(self.next().text for _ in range(n))
            self.expect("dot")
            try:
                c = parse_coefficient(lit, self.semiring)
            except CoefficientError as e:
                raise ParseError(str(e), first.line, first.col) from None
            return Scale(c, self.scale())
        return self.app()

    def starts_atom(self) -> bool:
        t = self.peek()
        if t.kind in ("id", "lam", "lp"):
            return self._coeff_len() == 0
        return t.kind == "num" and t.text == "0" and self._coeff_len() == 0

    def app(self) -> RawTerm:
        if not self.starts_atom():
            t = self.peek()
            raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.line, t.col)
        t = self.atom()
        while self.starts_atom():
            t = App(t, self.atom())
        return t

    def atom(self) -> RawTerm:
        t = self.next()
        if t.kind == "id":
            return self.var(t.text)
        if t.kind == "num":
            return Zero()
        if t.kind == "lam":
            name = self.expect("id").text
            self.expect("dot")
            self.scope.append(name)
            try:
                body = self.term()
            finally:
                self.scope.pop()
            return Lam(body, name)
        # '(' term ')' atom?
        inner = self.term()
        self.expect("rp")
        if self.starts_atom():
            return App(inner, self.atom())
        return inner

    def var(self, name: str) -> Var:
        for k, bound in enumerate(reversed(self.scope)):
            if bound == name:
                return Var(k)
        return Var(name)


def parse(text: str, semiring: SemiringId = SemiringId.NAT) -> RawTerm:
    return _Parser(text, semiring).run()


def parse_pure(text: str) -> RawTerm:
    t = parse(text)
    if not is_pure(t):
        raise ValueError(f"{text!r} is not a pure lambda-term")
    return t


# -- printing -------------------------------------------------------------------


def _fresh(hint: str, avoid) -> str:
    name = hint
    k = 0
    while name in avoid:
        k += 1
        name = f"{hint}{k}"
    return name


class Namer:
    """Chooses printable binder names that never shadow or capture."""

    def __init__(self, free: set[str]):
        self.avoid = set(free)
        self.stack: list[str] = []

    def push(self, hint: str) -> str:
        name = _fresh(hint or "x", self.avoid)
        self.avoid.add(name)
        self.stack.append(name)
        return name

    def pop(self) -> None:
        self.avoid.discard(self.stack.pop())

    def lookup(self, name: Name) -> str:
        if isinstance(name, str):
            return name
        if name < len(self.stack):
            return self.stack[-1 - name]
        # dangling index: print it recognisably rather than fail
        return f"#{name - len(self.stack)}"


def show(t: RawTerm) -> str:
    return _show(t, Namer(free_names(t)), "top")


def _paren(s: str) -> str:
    return f"({s})"


def _show(t: RawTerm, nm: Namer, ctx: str) -> str:
    # ctx: 'top' (anything goes), 'sum' (summand), 'scale' (body of a.), 'arg'
    if isinstance(t, Var):
        return nm.lookup(t.name)
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Lam):
        name = nm.push(t.hint)
        try:
            s = f"λ{name}.{_show(t.body, nm, 'top')}"
        finally:
            nm.pop()
        return s if ctx == "top" else _paren(s)
    if isinstance(t, App):
        s = _paren(_show(t.fun, nm, "top")) + _show(t.arg, nm, "arg")
        return s
    if isinstance(t, Scale):
        s = f"{t.coeff}.{_show(t.body, nm, 'scale')}"
        return _paren(s) if ctx == "arg" else s
    # Sum
    s = f"{_show(t.left, nm, 'sum')} + {_show(t.right, nm, 'summand')}"
    return s if ctx in ("top", "sum") else _paren(s)
