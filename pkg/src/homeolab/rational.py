"""Exact rational scalars.

Every coordinate, parameter and angle in the package is a ``Rat``: a GMP
rational kept in lowest terms with a positive denominator.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

from gmpy2 import mpq

Rat = type(mpq(0))

RatLike = Union[int, str, Fraction, "mpq"]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)


def rat(value: RatLike, den: int | None = None) -> Rat:
    """Coerce ``value`` (or ``value/den``) to a Rat.

    Strings must be decimal-free: ``"p/q"`` or ``"p"``.  Floats are refused
    because they would smuggle binary rounding into exact computations.
    """
    if den is not None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return mpq(value, den)
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass 'p/q' instead")
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if m is None:
            raise ValueError(f"not a decimal-free rational: {value!r}")
        num = int(m.group(1))
        d = int(m.group(2)) if m.group(2) is not None else 1
        if d == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return mpq(num, d)
    return mpq(value)


def fmt(x: Rat) -> str:
    """Canonical ``"p/q"`` text, denominator always present."""
    x = mpq(x)
    return f"{x.numerator}/{x.denominator}"


def floor(x: Rat) -> int:
    x = mpq(x)
    return int(x.numerator // x.denominator)


def ceil(x: Rat) -> int:
    x = mpq(x)
    return -int((-x.numerator) // x.denominator)


def frac(x: Rat) -> Rat:
    """Fractional part in [0, 1)."""
    return mpq(x) - floor(x)


def sign(x: Rat) -> int:
    return (x > 0) - (x < 0)


def sqrt_bounds(x: Rat, bits: int = 64) -> tuple[Rat, Rat]:
    """Rational ``lo <= sqrt(x) <= hi``; exact (lo == hi) for rational squares."""
    x = mpq(x)
    if x < 0:
        raise ValueError("negative radicand")
    n, d = int(x.numerator), int(x.denominator)
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        r = mpq(rn, rd)
        return r, r
    scale = 1 << bits
    # sqrt(n/d) = sqrt(n*d)/d
    root = math.isqrt(n * d * scale * scale)
    lo = mpq(root, d * scale)
    hi = mpq(root + 1, d * scale)
    return lo, hi

