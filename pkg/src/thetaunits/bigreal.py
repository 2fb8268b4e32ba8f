"""Precision bookkeeping for mpmath reals.

All numeric results in the package are ``mpmath.mpf`` values.  A function
called with precision ``prec`` works internally at ``prec + GUARD`` bits and
documents its result as accurate to ``2**-(prec - GUARD)`` relative error.

mpmath keeps the working precision in a process-global context, so the
``workprec`` blocks used here are not thread safe; run concurrent jobs in
separate processes.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpf

DEFAULT_PREC = 256
GUARD = 32

Real = Union[int, float, str, Fraction, mpf]


def to_mpf(x: Real) -> mpf:
    """Convert ``x`` at the current working precision (Fractions exactly rounded)."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def as_fraction(x) -> Fraction:
    """Parse a positive rational given as int, Fraction or 'p/q' string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def eps(bits: int) -> mpf:
    """2**-bits as an exact mpf."""
    return mpmath.ldexp(mpf(1), -bits)


def rel_diff(a: mpf, b: mpf) -> mpf:
    """|a - b| / max(1, |a|, |b|) evaluated exactly enough for tolerance tests."""
    with mp.workprec(64):
        scale = max(mpf(1), abs(a), abs(b))
        return abs(a - b) / scale


def agree(a: mpf, b: mpf, bits: int) -> bool:
    """True when ``a`` and ``b`` agree to ``bits`` bits (relative above 1, absolute below)."""
    return rel_diff(a, b) < eps(bits)


def to_decimal(x: mpf, prec: int) -> str:
    """Decimal string carrying the ``prec - GUARD`` trustworthy bits."""
    digits = max(10, int((prec - GUARD) * 0.30103))
    return mpmath.nstr(x, digits, strip_zeros=False)
