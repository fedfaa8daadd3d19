"""Random and exhaustive term generators for tests and benchmarks.

All random generators take an explicit :class:`random.Random` so runs are
reproducible from a seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, Sequence

from . import mashup
from .algebra import AlgebraicTerm, canonicalize
from .reduction import FULL, AlgTrace, BetaTrace, SplitPolicy, alg_steps, beta_reducts
from .semiring import Coefficient, SemiringId, coeff
from .syntax import App, Lam, RawTerm, Scale, Sum, Var, Zero, shift

FREE = ("x", "y", "z")
HINTS = "uvwst"


def coefficient(rng: random.Random, semiring: SemiringId, nonzero: bool = False) -> Coefficient:
    lo = 1 if nonzero else 0
    if semiring is SemiringId.BOOL:
        return coeff(semiring, rng.randint(lo, 1))
    if semiring is SemiringId.NAT:
        return coeff(semiring, rng.randint(lo, 4))
    if semiring is SemiringId.INT:
        v = rng.randint(-3, 3)
        while nonzero and v == 0:
            v = rng.randint(-3, 3)
        return coeff(semiring, v)
    num = rng.randint(lo, 6)
    return coeff(semiring, Fraction(num, rng.randint(1, 3)))


def _var(rng: random.Random, depth: int, free: Sequence[str]) -> Var:
    if depth and rng.random() < 0.6:
        return Var(rng.randrange(depth))
    return Var(rng.choice(free))


def pure_term(rng: random.Random, size: int, depth: int = 0, free: Sequence[str] = FREE,
              redex_bias: float = 0.35) -> RawTerm:
    """A pure term of size at most ``size``; bound indices stay below ``depth`` plus its own binders."""
    if size <= 1 or (size <= 3 and rng.random() < 0.3):
        return _var(rng, depth, free)
    if size >= 4 and rng.random() < redex_bias:
        k = rng.randint(2, size - 2)
        body = pure_term(rng, k - 1, depth + 1, free, redex_bias)
        return App(Lam(body, rng.choice(HINTS)), pure_term(rng, size - k - 1, depth, free, redex_bias))
    if rng.random() < 0.4:
        return Lam(pure_term(rng, size - 1, depth + 1, free, redex_bias), rng.choice(HINTS))
    if size < 3:
        return _var(rng, depth, free)
    k = rng.randint(1, size - 2)
    return App(pure_term(rng, k, depth, free, redex_bias), pure_term(rng, size - 1 - k, depth, free, redex_bias))


def raw_term(rng: random.Random, size: int, semiring: SemiringId, depth: int = 0,
             free: Sequence[str] = FREE, redex_bias: float = 0.3) -> RawTerm:
    """A raw term that may contain ``0``, sums and scalings anywhere."""
    if size <= 1:
        return Zero() if rng.random() < 0.1 else _var(rng, depth, free)
    r = rng.random()
    if size >= 4 and r < redex_bias:
        k = rng.randint(2, size - 2)
        body = raw_term(rng, k - 1, semiring, depth + 1, free, redex_bias)
        return App(Lam(body, rng.choice(HINTS)), raw_term(rng, size - k - 1, semiring, depth, free, redex_bias))
    r = rng.random()
    if r < 0.2:
        return Lam(raw_term(rng, size - 1, semiring, depth + 1, free, redex_bias), rng.choice(HINTS))
    if r < 0.35:
        return Scale(coefficient(rng, semiring), raw_term(rng, size - 1, semiring, depth, free, redex_bias))
    if size < 3:
        return _var(rng, depth, free)
    k = rng.randint(1, size - 2)
    left = raw_term(rng, k, semiring, depth, free, redex_bias)
    right = raw_term(rng, size - 1 - k, semiring, depth, free, redex_bias)
    return Sum(left, right) if r < 0.6 else App(left, right)


def algebraic_term(rng: random.Random, size: int, semiring: SemiringId, **kw) -> AlgebraicTerm:
    return canonicalize(raw_term(rng, size, semiring, **kw), semiring)


def pure_terms_of_size(n: int, depth: int = 0, free: Sequence[str] = FREE) -> Iterator[RawTerm]:
    """Every pure term of exactly size ``n`` (variables count 1, binders and applications 1 each)."""
    if n == 1:
        for i in range(depth):
            yield Var(i)
        for x in free:
            yield Var(x)
        return
    for body in pure_terms_of_size(n - 1, depth + 1, free):
        yield Lam(body, "u")
    for k in range(1, n - 1):
        funs = list(pure_terms_of_size(k, depth, free))
        args = list(pure_terms_of_size(n - 1 - k, depth, free))
        for f in funs:
            for a in args:
                yield App(f, a)


def pure_terms_upto(n: int, free: Sequence[str] = FREE) -> Iterator[RawTerm]:
    for k in range(1, n + 1):
        yield from pure_terms_of_size(k, 0, free)


def random_walk(s: AlgebraicTerm, rng: random.Random, length: int, policy: SplitPolicy = FULL) -> AlgTrace:
    """A trace of up to ``length`` uniformly chosen steps; stops early at a normal form."""
    steps = []
    cur = s
    for _ in range(length):
        options = alg_steps(cur, policy)
        if not options:
            break
        st = rng.choice(options)
        steps.append(st)
        cur = st.result
    return AlgTrace(s, tuple(steps))


def redex_wrap(rng: random.Random, m: RawTerm, depth: int = 0) -> RawTerm:
    """A term contracting to ``m`` in one head step: ``(λv.v)m`` or ``(λv.m)P``."""
    if rng.random() < 0.5:
        return App(Lam(Var(0), "v"), m)
    return App(Lam(shift(m, 1), "v"), pure_term(rng, 3, depth))



def beta_walk(rng: random.Random, m: RawTerm, max_steps: int) -> BetaTrace:
    """A random beta trace of at most ``max_steps`` steps from ``m``."""
    steps = []
    cur = m
    for _ in range(rng.randint(0, max_steps)):
        options = beta_reducts(cur)
        if not options:
            break
        pos, cur = rng.choice(options)
        steps.append((pos, cur))
    return BetaTrace(m, tuple(steps))


def derivation(rng: random.Random, m: RawTerm, semiring: SemiringId, parts: int = 3,
               max_steps: int = 3, reduce_rhs: int = 2) -> mashup.Derivation:
    """A valid ``M ⊩ σ`` pasting a few random beta walks of ``M`` together.

    Each walk ends at some ``N``; ``refl(N)`` is precomposed with the walk and
    the pieces are combined with (+').  Over a positive semiring a couple of
    algebraic steps are then pushed through with ``step_derivation``.
    """
    d: mashup.Derivation = mashup.ZeroNode(m, semiring)
    for _ in range(rng.randint(1, parts)):
        tr = beta_walk(rng, m, max_steps)
        piece = mashup.precompose(tr, mashup.refl(tr.end, semiring))
        d = mashup.admissible_plus(coefficient(rng, semiring, nonzero=rng.random() < 0.85), piece, d)
    if semiring.positive:
        policy = SplitPolicy("unit") if semiring is SemiringId.NAT else (
            SplitPolicy("half") if semiring is SemiringId.NONNEG_RAT else FULL)
        for _ in range(rng.randint(0, reduce_rhs)):
            options = alg_steps(mashup.rhs(d), policy)
            if not options:
                break
            d = mashup.step_derivation(d, rng.choice(options))
    return d
