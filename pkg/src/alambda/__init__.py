"""Algebraic lambda-calculus with executable conservativity certificates."""

from .semiring import SemiringId, Coefficient
from .syntax import parse, show
from .algebra import AlgebraicTerm, canonicalize, embed, as_pure
from .conservativity import conserve, equiv_check

__version__ = "0.1.0"

__all__ = [
    "SemiringId",
    "Coefficient",
    "parse",
    "show",
    "AlgebraicTerm",
    "canonicalize",
    "embed",
    "as_pure",
    "conserve",
    "equiv_check",
]
