"""Exact rational scalars.

Every coefficient, matrix entry and witness in this library is an exact
rational number.  We use gmpy2's ``mpq`` (GMP-backed, roughly an order of
magnitude faster than ``fractions.Fraction``) and fall back to ``Fraction``
when gmpy2 is unavailable.  The two types interoperate (equality, hashing,
arithmetic), so callers may pass either, plus ints and ``"p/q"`` strings.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

try:
    from gmpy2 import mpq as _mpq

    def Q(a: Union[int, str, Fraction, "_mpq"] = 0, b: int | None = None):
        """Coerce to an exact rational (no floats accepted)."""
        if b is not None:
            return _mpq(a, b)
        return _mpq(a)

    RAT_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover
    def Q(a=0, b=None):
        if b is not None:
            return Fraction(a, b)
        return Fraction(a)

    RAT_BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)

Rational = type(ONE)


def rat_from_str(s: str):
    """Parse "p/q" or "p" into an exact rational."""
    return Q(s.strip())


def rat_str(x) -> str:
    """Canonical "p/q" (or "p" for integers) rendering."""
    x = Q(x)
    n, d = x.numerator, x.denominator
    return f"{n}/{d}" if d != 1 else f"{n}"


def sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0
