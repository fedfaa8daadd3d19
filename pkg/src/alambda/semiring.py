"""Exact coefficient arithmetic for the supported semirings.

Four instances are available: the naturals, the non-negative rationals,
the booleans (with ``1 + 1 = 1``) and the integers.  Only the first three
are positive; the integers are kept around to demonstrate what goes wrong
when ``1`` has an additive inverse.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "SemiringId",
    "Coefficient",
    "SemiringMismatch",
    "CoefficientError",
    "PositivityRequired",
    "Positive",
    "CounterexamplePair",
    "zero",
    "one",
    "coeff",
    "add",
    "mul",
    "parse_coefficient",
    "positivity_probe",
    "require_positive",
    "semiring_from_name",
]


class SemiringId(enum.Enum):
    NAT = "nat"
    NONNEG_RAT = "rat+"
    BOOL = "bool"
    INT = "int"

    @property
    def positive(self) -> bool:
        return self is not SemiringId.INT


def semiring_from_name(name: str) -> SemiringId:
    try:
        return SemiringId(name.lower())
    except ValueError:
        raise ValueError(
            f"unknown semiring {name!r}; expected one of "
            + ", ".join(s.value for s in SemiringId)
        ) from None


class SemiringMismatch(ValueError):
    """Raised when operands live in different semirings."""


class CoefficientError(ValueError):
    """Raised for a value that is not an element of the requested semiring."""


class PositivityRequired(ValueError):
    """Raised when an operation needs a positive semiring but got INT."""


def require_positive(semiring: SemiringId, what: str = "this operation") -> None:
    if not semiring.positive:
        raise PositivityRequired(
            f"{what} requires a positive semiring, got {semiring.value}"
        )


Number = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Coefficient:
    """An element of one semiring.

    ``value`` is an ``int`` for NAT, INT and BOOL (0 or 1) and a ``Fraction``
    for NONNEG_RAT.  Values are normalised on construction so that
    structural equality is semiring equality.
    """

    semiring: SemiringId
    value: Number

    def __post_init__(self):
        s, v = self.semiring, self.value
        if isinstance(v, bool):
            v = int(v)
        if s is SemiringId.NONNEG_RAT:
            v = Fraction(v)
            if v < 0:
                raise CoefficientError(f"negative value {v} in rat+")
        else:
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise CoefficientError(f"{v} is not an element of {s.value}")
                v = v.numerator
            if not isinstance(v, int):
                raise CoefficientError(f"{v!r} is not an element of {s.value}")
            if s is SemiringId.NAT and v < 0:
                raise CoefficientError(f"negative value {v} in nat")
            if s is SemiringId.BOOL and v not in (0, 1):
                raise CoefficientError(f"{v} is not a boolean")
        object.__setattr__(self, "value", v)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __add__(self, other: "Coefficient") -> "Coefficient":
        return add(self, other)

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        return mul(self, other)

    def __str__(self) -> str:
        if self.semiring is SemiringId.BOOL:
            return "T" if self.value else "F"
        if isinstance(self.value, Fraction) and self.value.denominator != 1:
            return f"{self.value.numerator}/{self.value.denominator}"
        return str(int(self.value))

    def __repr__(self) -> str:
        return f"Coefficient({self.semiring.value}, {self})"


def coeff(semiring: SemiringId, value: Number) -> Coefficient:
    return Coefficient(semiring, value)


def zero(semiring: SemiringId) -> Coefficient:
    return Coefficient(semiring, 0)


def one(semiring: SemiringId) -> Coefficient:
    return Coefficient(semiring, 1)


def _same(x: Coefficient, y: Coefficient) -> SemiringId:
    if x.semiring is not y.semiring:
        raise SemiringMismatch(
            f"cannot combine {x.semiring.value} and {y.semiring.value} coefficients"
        )
    return x.semiring


def add(x: Coefficient, y: Coefficient) -> Coefficient:
    s = _same(x, y)
    if s is SemiringId.BOOL:
        return Coefficient(s, x.value | y.value)
    return Coefficient(s, x.value + y.value)


def mul(x: Coefficient, y: Coefficient) -> Coefficient:
    s = _same(x, y)
    if s is SemiringId.BOOL:
        return Coefficient(s, x.value & y.value)
    return Coefficient(s, x.value * y.value)


_INT_RE = re.compile(r"-?[0-9]+\Z")
_RAT_RE = re.compile(r"([0-9]+)/([1-9][0-9]*)\Z")


def parse_coefficient(text: str, semiring: SemiringId) -> Coefficient:
    """Read a coefficient literal: ``12``, ``-3`` (int only), ``p/q`` (rat+ only), ``T``/``F`` (bool only)."""
    if semiring is SemiringId.BOOL:
        if text in ("T", "F"):
            return Coefficient(semiring, 1 if text == "T" else 0)
        raise CoefficientError(f"{text!r} is not a bool coefficient (expected T or F)")
    if _INT_RE.match(text):
        if text.startswith("-") and semiring is not SemiringId.INT:
            raise CoefficientError(f"negative literal {text!r} only allowed in int")
        return Coefficient(semiring, int(text))
    m = _RAT_RE.match(text)
    if m and semiring is SemiringId.NONNEG_RAT:
        return Coefficient(semiring, Fraction(int(m.group(1)), int(m.group(2))))
    raise CoefficientError(f"{text!r} is not a valid {semiring.value} coefficient")


@dataclass(frozen=True)
class Positive:
    semiring: SemiringId
    checked: int


@dataclass(frozen=True)
class CounterexamplePair:
    a: Coefficient
    b: Coefficient


def positivity_probe(
    semiring: SemiringId, samples: Iterable[tuple[Coefficient, Coefficient]]
) -> Positive | CounterexamplePair:
    """Look for ``a + b = 0`` with ``(a, b) != (0, 0)`` among the samples."""
    n = 0
    for a, b in samples:
        if a.semiring is not semiring or b.semiring is not semiring:
            raise SemiringMismatch("sample outside the probed semiring")
        n += 1
        if add(a, b).is_zero() and not (a.is_zero() and b.is_zero()):
            return CounterexamplePair(a, b)
    return Positive(semiring, n)
