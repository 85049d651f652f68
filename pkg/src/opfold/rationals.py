"""Helpers around fractions.Fraction: parsing, canonical formatting, signed squares.

Fraction already guarantees the invariants the exact kernel relies on
(always reduced, positive denominator, arbitrary precision), so it is used
directly as the rational scalar type everywhere in the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["as_fraction", "rat_str", "SignedSquare"]


def as_fraction(value) -> Fraction:
    """Coerce int / Fraction / 'p/q' string to Fraction.

    Strings must be integer or integer/integer; no decimals, so config files
    cannot smuggle rounded values into the exact pipeline.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(q: Fraction) -> str:
    """Canonical decimal-free rendering: 'p' for integers, 'p/q' otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _csqrt(q: Fraction):
    # principal square root; negative input lands on the positive imaginary axis
    if q >= 0:
        return math.sqrt(q)
    return 1j * math.sqrt(-q)


@dataclass(frozen=True)
class SignedSquare:
    """An exact (value**2, sign) pair for quantities whose square is rational.

    Orthonormal recurrence and connection entries are of the form
    rational * sqrt(rational); storing the squared value keeps every
    comparison exact while ``value()`` gives the floating realization.
    A negative ``sq`` encodes a purely imaginary value (indefinite norms).
    """

    sq: Fraction
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0, or +1")
        if (self.sign == 0) != (self.sq == 0):
            raise ValueError("sign is zero exactly when the square is zero")

    def value(self):
        """Floating (possibly complex) realization sign * sqrt(sq)."""
        if self.sign == 0:
            return 0.0
        return self.sign * _csqrt(Fraction(self.sq))

    def __repr__(self):
        op = {1: "+", 0: "", -1: "-"}[self.sign]
        return f"{op}sqrt({rat_str(self.sq)})" if self.sign else "0"
