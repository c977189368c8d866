"""Exact/inexact number handling shared by the game modules."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

#: comparison slack used whenever a float is involved
TOLERANCE = 1e-12


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def exceeds(a, b, tol: float = TOLERANCE) -> bool:
    """True iff ``a > b``; exact on rationals, ``a - b > tol`` otherwise."""
    if is_exact(a) and is_exact(b):
        return a > b
    return float(a) - float(b) > tol


def close(a, b, tol: float = TOLERANCE) -> bool:
    return not exceeds(a, b, tol) and not exceeds(b, a, tol)


def parse_number(value):
    """Parse a scenario number.

    ints stay ints, floats stay floats, and strings such as ``"8/15"`` or
    ``"3"`` become :class:`~fractions.Fraction` for exact arithmetic.
    """
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float, Fraction)):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse number {value!r}") from exc
    raise ValueError(f"expected a number, got {value!r}")


def fmt(x) -> str:
    """Short stable rendering: integers bare, fractions as p/q, floats via repr."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float) and x.is_integer():
        return str(int(x)) if abs(x) < 1e15 else repr(x)
    return str(x)
