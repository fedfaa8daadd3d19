"""Algebraic terms as canonical finite linear combinations of simple terms.

A simple term is a variable, an abstraction of a simple term, or an
application whose function is simple and whose argument is an arbitrary
algebraic term.  Because algebraic terms form the free module over simple
terms, a sorted tuple of ``(simple, coefficient)`` pairs with no zero
coefficient is a canonical representative of each class: two raw terms are
algebraically equal exactly when they canonicalize to equal tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from . import syntax
from .semiring import Coefficient, SemiringId, SemiringMismatch, coeff, one, zero
from .syntax import App, Lam, RawTerm, Scale, Sum, Var, Zero

__all__ = [
    "SimpleTerm",
    "SVar",
    "SLam",
    "SApp",
    "AlgebraicTerm",
    "combination",
    "single",
    "canonicalize",
    "embed",
    "simple_of",
    "as_pure",
    "as_pure_simple",
    "add",
    "scale",
    "support",
    "alam",
    "aapp",
    "readback",
    "shift_alg",
    "shift_simple",
    "instantiate_alg",
    "instantiate_simple",
    "abstract_alg",
    "subst",
    "subst_simple",
    "lambda_support",
    "recast",
    "render",
    "render_simple",
]

Name = Union[int, str]


class SimpleTerm:
    __slots__ = ()
    _key: tuple
    _h: int

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SimpleTerm):
            return NotImplemented
        return self._h == other._h and self._key == other._key

    def __hash__(self):
        return self._h

    def __lt__(self, other: "SimpleTerm") -> bool:
        return self._key < other._key

    def __str__(self) -> str:
        return render_simple(self)


@dataclass(frozen=True, eq=False, repr=False)
class SVar(SimpleTerm):
    name: Name
    _key: tuple = field(init=False, repr=False)
    _h: int = field(init=False, repr=False)

    def __post_init__(self):
        if isinstance(self.name, int):
            key = (0, 0, self.name)
        else:
            key = (0, 1, self.name)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_h", hash(key))

    def __repr__(self):
        return f"SVar({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class SLam(SimpleTerm):
    body: SimpleTerm
    hint: str = "x"
    _key: tuple = field(init=False, repr=False)
    _h: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (1, self.body._key))
        object.__setattr__(self, "_h", hash(("l", self.body._h)))

    def __repr__(self):
        return f"SLam({self.body!r})"


@dataclass(frozen=True, eq=False, repr=False)
class SApp(SimpleTerm):
    fun: SimpleTerm
    arg: "AlgebraicTerm"
    _key: tuple = field(init=False, repr=False)
    _h: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (2, self.fun._key, self.arg._key))
        object.__setattr__(self, "_h", hash(("a", self.fun._h, self.arg._h)))

    def __repr__(self):
        return f"SApp({self.fun!r}, {self.arg!r})"


class AlgebraicTerm:
    """An element of the free module over simple terms.

    Build these with :func:`combination`, :func:`single` or
    :func:`canonicalize`; the constructor trusts its input to be canonical.
    """

    __slots__ = ("semiring", "items", "_key", "_h")

    def __init__(self, semiring: SemiringId, items: tuple[tuple[SimpleTerm, Coefficient], ...]):
        self.semiring = semiring
        self.items = items
        self._key = tuple((s._key, c.value) for s, c in items)
        self._h = hash((semiring, tuple((s._h, c.value) for s, c in items)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AlgebraicTerm):
            return NotImplemented
        return (
            self._h == other._h
            and self.semiring is other.semiring
            and self._key == other._key
        )

    def __hash__(self):
        return self._h

    def __iter__(self) -> Iterator[tuple[SimpleTerm, Coefficient]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __add__(self, other: "AlgebraicTerm") -> "AlgebraicTerm":
        return add(self, other)

    def __rmul__(self, a: Coefficient) -> "AlgebraicTerm":
        return scale(a, self)

    def coefficient(self, s: SimpleTerm) -> Coefficient:
        for t, c in self.items:
            if t == s:
                return c
        return zero(self.semiring)

    def support(self) -> tuple[SimpleTerm, ...]:
        return tuple(s for s, _ in self.items)

    def as_dict(self) -> dict[SimpleTerm, Coefficient]:
        return dict(self.items)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"AlgebraicTerm({self.semiring.value}, {render(self)!r})"


def combination(semiring: SemiringId, pairs: Iterable[tuple[SimpleTerm, Coefficient]]) -> AlgebraicTerm:
    """Sum up ``pairs`` (repeats allowed) into canonical form."""
    acc: dict[SimpleTerm, Coefficient] = {}
    for s, c in pairs:
        if c.semiring is not semiring:
            raise SemiringMismatch(f"{c!r} in a {semiring.value} combination")
        prev = acc.get(s)
        acc[s] = c if prev is None else prev + c
    items = tuple(sorted(((s, c) for s, c in acc.items() if not c.is_zero()), key=lambda p: p[0]._key))
    return AlgebraicTerm(semiring, items)


def single(s: SimpleTerm, semiring: SemiringId, c: Optional[Coefficient] = None) -> AlgebraicTerm:
    c = one(semiring) if c is None else c
    if c.is_zero():
        return AlgebraicTerm(semiring, ())
    return AlgebraicTerm(semiring, ((s, c),))


def _check(s: AlgebraicTerm, t: AlgebraicTerm) -> SemiringId:
    if s.semiring is not t.semiring:
        raise SemiringMismatch(f"cannot combine {s.semiring.value} and {t.semiring.value} terms")
    return s.semiring


def add(s: AlgebraicTerm, t: AlgebraicTerm) -> AlgebraicTerm:
    return combination(_check(s, t), list(s.items) + list(t.items))


def scale(a: Coefficient, s: AlgebraicTerm) -> AlgebraicTerm:
    if a.semiring is not s.semiring:
        raise SemiringMismatch(f"cannot scale a {s.semiring.value} term by {a!r}")
    if a.is_zero():
        return AlgebraicTerm(s.semiring, ())
    return combination(s.semiring, ((u, a * c) for u, c in s.items))


def support(s: AlgebraicTerm) -> tuple[SimpleTerm, ...]:
    return s.support()


def alam(s: AlgebraicTerm, hint: str = "x") -> AlgebraicTerm:
    """Abstraction extended linearly: λx.(Σ aᵢ.uᵢ) = Σ aᵢ.λx.uᵢ."""
    return AlgebraicTerm(s.semiring, tuple((SLam(u, hint), c) for u, c in s.items))


def aapp(f: AlgebraicTerm, a: AlgebraicTerm) -> AlgebraicTerm:
    """Application, linear in the function position only."""
    _check(f, a)
    return AlgebraicTerm(f.semiring, tuple((SApp(u, a), c) for u, c in f.items))


def canonicalize(t: RawTerm, semiring: SemiringId = SemiringId.NAT) -> AlgebraicTerm:
    if isinstance(t, Var):
        return single(SVar(t.name), semiring)
    if isinstance(t, Lam):
        return alam(canonicalize(t.body, semiring), t.hint)
    if isinstance(t, App):
        return aapp(canonicalize(t.fun, semiring), canonicalize(t.arg, semiring))
    if isinstance(t, Zero):
        return AlgebraicTerm(semiring, ())
    if isinstance(t, Sum):
        return add(canonicalize(t.left, semiring), canonicalize(t.right, semiring))
    if isinstance(t, Scale):
        return scale(t.coeff, canonicalize(t.body, semiring))
    raise TypeError(f"not a raw term: {t!r}")


def simple_of(m: RawTerm, semiring: SemiringId = SemiringId.NAT) -> SimpleTerm:
    """The simple term denoted by a pure term."""
    if isinstance(m, Var):
        return SVar(m.name)
    if isinstance(m, Lam):
        return SLam(simple_of(m.body, semiring), m.hint)
    if isinstance(m, App):
        return SApp(simple_of(m.fun, semiring), embed(m.arg, semiring))
    raise ValueError(f"not a pure term: {m!r}")


def embed(m: RawTerm, semiring: SemiringId = SemiringId.NAT) -> AlgebraicTerm:
    return single(simple_of(m, semiring), semiring)


def as_pure_simple(s: SimpleTerm) -> Optional[RawTerm]:
    if isinstance(s, SVar):
        return Var(s.name)
    if isinstance(s, SLam):
        b = as_pure_simple(s.body)
        return None if b is None else Lam(b, s.hint)
    f = as_pure_simple(s.fun)
    if f is None:
        return None
    a = as_pure(s.arg)
    return None if a is None else App(f, a)


def as_pure(s: AlgebraicTerm) -> Optional[RawTerm]:
    if len(s.items) != 1:
        return None
    u, c = s.items[0]
    if not c.is_one():
        return None
    return as_pure_simple(u)


def readback_simple(s: SimpleTerm) -> RawTerm:
    if isinstance(s, SVar):
        return Var(s.name)
    if isinstance(s, SLam):
        return Lam(readback_simple(s.body), s.hint)
    return App(readback_simple(s.fun), readback(s.arg))


def readback(s: AlgebraicTerm) -> RawTerm:
    """A raw term denoting ``s`` (left-nested sums, explicit coefficients)."""
    out: Optional[RawTerm] = None
    for u, c in s.items:
        r = readback_simple(u)
        if not c.is_one():
            r = Scale(c, r)
        out = r if out is None else Sum(out, r)
    return Zero() if out is None else out


def recast(s: AlgebraicTerm, semiring: SemiringId) -> AlgebraicTerm:
    """Reinterpret the coefficients of ``s`` in another semiring."""
    return combination(semiring, ((_recast_simple(u, semiring), coeff(semiring, c.value)) for u, c in s.items))


def _recast_simple(u: SimpleTerm, semiring: SemiringId) -> SimpleTerm:
    if isinstance(u, SVar):
        return u
    if isinstance(u, SLam):
        return SLam(_recast_simple(u.body, semiring), u.hint)
    return SApp(_recast_simple(u.fun, semiring), recast(u.arg, semiring))


# -- binding operations ---------------------------------------------------------


def shift_simple(u: SimpleTerm, d: int, cutoff: int = 0) -> SimpleTerm:
    if d == 0:
        return u
    if isinstance(u, SVar):
        if isinstance(u.name, int) and u.name >= cutoff:
            return SVar(u.name + d)
        return u
    if isinstance(u, SLam):
        return SLam(shift_simple(u.body, d, cutoff + 1), u.hint)
    return SApp(shift_simple(u.fun, d, cutoff), shift_alg(u.arg, d, cutoff))


def shift_alg(s: AlgebraicTerm, d: int, cutoff: int = 0) -> AlgebraicTerm:
    if d == 0:
        return s
    # shifting is injective, so the result stays canonical once re-sorted
    return combination(s.semiring, ((shift_simple(u, d, cutoff), c) for u, c in s.items))


def instantiate_simple(u: SimpleTerm, j: int, r: AlgebraicTerm, semiring: SemiringId) -> AlgebraicTerm:
    """``u`` with index ``j`` replaced by ``r``, as a canonical combination.

    Substituting a sum into function position re-distributes the
    application over it, so the result of a simple term is in general a
    combination.  Every occurrence receives a full copy of ``r``.
    """
    if isinstance(u, SVar):
        k = u.name
        if isinstance(k, int):
            if k == j:
                return shift_alg(r, j)
            if k > j:
                return single(SVar(k - 1), semiring)
        return single(u, semiring)
    if isinstance(u, SLam):
        return alam(instantiate_simple(u.body, j + 1, r, semiring), u.hint)
    return aapp(instantiate_simple(u.fun, j, r, semiring), instantiate_alg(u.arg, j, r))


def instantiate_alg(s: AlgebraicTerm, j: int, r: AlgebraicTerm) -> AlgebraicTerm:
    _check(s, r)
    out = []
    for u, c in s.items:
        for v, e in instantiate_simple(u, j, r, s.semiring).items:
            out.append((v, c * e))
    return combination(s.semiring, out)


def _abstract_simple(u: SimpleTerm, x: str, j: int) -> SimpleTerm:
    if isinstance(u, SVar):
        if u.name == x:
            return SVar(j)
        if isinstance(u.name, int) and u.name >= j:
            return SVar(u.name + 1)
        return u
    if isinstance(u, SLam):
        return SLam(_abstract_simple(u.body, x, j + 1), u.hint)
    return SApp(_abstract_simple(u.fun, x, j), abstract_alg(u.arg, x, j))


def abstract_alg(s: AlgebraicTerm, x: str, j: int = 0) -> AlgebraicTerm:
    return combination(s.semiring, ((_abstract_simple(u, x, j), c) for u, c in s.items))


def subst_simple(u: SimpleTerm, x: Name, r: AlgebraicTerm) -> AlgebraicTerm:
    """``u[r/x]``; ``x`` is a free name, or an index to instantiate."""
    if isinstance(x, int):
        return instantiate_simple(u, x, r, r.semiring)
    return instantiate_simple(_abstract_simple(u, x, 0), 0, r, r.semiring)


def subst(s: AlgebraicTerm, x: Name, r: AlgebraicTerm) -> AlgebraicTerm:
    """``s[r/x]``, extended linearly over the support of ``s``."""
    if isinstance(x, int):
        return instantiate_alg(s, x, r)
    return instantiate_alg(abstract_alg(s, x), 0, r)


# -- Λ(σ) -------------------------------------------------------------------------


def _lambda_support_simple(u: SimpleTerm) -> frozenset[RawTerm]:
    if isinstance(u, SVar):
        return frozenset([Var(u.name)])
    if isinstance(u, SLam):
        return frozenset(Lam(m, u.hint) for m in _lambda_support_simple(u.body))
    fs = _lambda_support_simple(u.fun)
    args = lambda_support(u.arg)
    return frozenset(App(m, n) for m in fs for n in args)


def lambda_support(s: AlgebraicTerm) -> frozenset[RawTerm]:
    """Pure terms obtained by keeping one element of the support of every sum."""
    out: set[RawTerm] = set()
    for u, _ in s.items:
        out |= _lambda_support_simple(u)
    return frozenset(out)


# -- rendering --------------------------------------------------------------------


def _free_simple(u: SimpleTerm, acc: set[str]) -> None:
    if isinstance(u, SVar):
        if isinstance(u.name, str):
            acc.add(u.name)
    elif isinstance(u, SLam):
        _free_simple(u.body, acc)
    else:
        _free_simple(u.fun, acc)
        for v, _ in u.arg.items:
            _free_simple(v, acc)


def render(s: AlgebraicTerm) -> str:
    """Canonical text: ``coeff.simple`` summands in canonical order, ``1.`` omitted."""
    acc: set[str] = set()
    for u, _ in s.items:
        _free_simple(u, acc)
    return _render_sum(s, syntax.Namer(acc), nested=False)


def render_simple(u: SimpleTerm) -> str:
    acc: set[str] = set()
    _free_simple(u, acc)
    return _render_simple(u, syntax.Namer(acc), "top")


def _render_sum(s: AlgebraicTerm, nm, nested: bool) -> str:
    if not s.items:
        return "0"
    alone = len(s.items) == 1
    parts = []
    for u, c in s.items:
        if c.is_one():
            parts.append(_render_simple(u, nm, "top" if alone else "summand"))
        else:
            parts.append(f"{c}.{_render_simple(u, nm, 'summand')}")
    return ("+" if nested else " + ").join(parts)


def _render_simple(u: SimpleTerm, nm, ctx: str) -> str:
    if isinstance(u, SVar):
        return nm.lookup(u.name)
    if isinstance(u, SLam):
        name = nm.push(u.hint)
        try:
            s = f"λ{name}.{_render_simple(u.body, nm, 'top')}"
        finally:
            nm.pop()
        return s if ctx == "top" else f"({s})"
    head = f"({_render_simple(u.fun, nm, 'top')})"
    arg = u.arg
    if len(arg.items) == 1 and arg.items[0][1].is_one():
        v = arg.items[0][0]
        return head + _render_simple(v, nm, "arg")
    return head + f"({_render_sum(arg, nm, nested=True)})"
