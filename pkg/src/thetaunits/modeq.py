"""From a closed-form b_{m,7} to the class invariants g_{7m} and g_{m/7}.

Pipeline: b -> x = r^2 + r^-2 via b + 1/b = (x^3 - 11x)/7, then
r = g_{7m} / g_{m/7}, then the degree-7 modular equation

    2 sqrt(2) (P^3 + P^-3) = r^4 + r^-4 - 7,   P = g_{7m} g_{m/7},

gives P, and finally g_{7m} = sqrt(r P), g_{m/7} = sqrt(P / r).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import qseries
from .bigreal import DEFAULT_PREC, GUARD, eps, rel_diff, to_decimal
from .errors import ConsistencyError, DomainError

__all__ = [
    "GnPair", "solve_x_from_b", "ratio_from_x", "solve_product_from_ratio",
    "modular_residual", "derive_gn_pipeline",
]


@dataclass
class GnPair:
    m: int
    big: mpf          # g_{7m}
    small: mpf        # g_{m/7}
    ratio: mpf
    product: mpf
    x: mpf
    b: mpf
    branch: str       # "direct" or "reciprocal" (branch that matched the q-series)
    prec: int
    cert_residual: mpf

    @property
    def S(self) -> mpf:
        with mp.workprec(self.prec + GUARD):
            return self.product ** 3 + self.product ** -3

    def as_dict(self) -> dict:
        p = self.prec
        return {
            "m": self.m, "big_index": 7 * self.m, "small_index": f"{self.m}/7",
            "g_big": to_decimal(self.big, p), "g_small": to_decimal(self.small, p),
            "ratio": to_decimal(self.ratio, p), "product": to_decimal(self.product, p),
            "x": to_decimal(self.x, p), "b": to_decimal(self.b, p),
            "branch": self.branch, "prec": p,
            "cert_residual": mpmath.nstr(self.cert_residual, 6),
        }


def _cubic(x: mpf, c: mpf) -> mpf:
    return x ** 3 - 11 * x - c


def solve_x_from_b(b, prec: int = DEFAULT_PREC) -> mpf:
    """Real root ``x >= 2`` of ``x^3 - 11 x - 7 (b + 1/b) = 0``."""
    with mp.workprec(prec + GUARD):
        b = mpf(b)
        if not (0 < b <= 1):
            raise DomainError("solve_x_from_b needs 0 < b <= 1")
        c = 7 * (b + 1 / b)
        lo = mpf(2)
        hi = 3 * max(mpf(2), mpmath.cbrt(c))
        # the cubic is increasing on [2, oo) and negative at 2 since c >= 14 > -14
        assert _cubic(lo, c) < 0 < _cubic(hi, c)
        for _ in range(60):
            mid = (lo + hi) / 2
            if _cubic(mid, c) < 0:
                lo = mid
            else:
                hi = mid
        x = (lo + hi) / 2
        tol = eps(prec + 8) * x
        for _ in range(200):
            step = _cubic(x, c) / (3 * x * x - 11)
            x -= step
            if abs(step) < tol:
                break
        return x


def ratio_from_x(x, prec: int = DEFAULT_PREC) -> mpf:
    """``r > 1`` with ``r^2 + r^-2 = x``."""
    with mp.workprec(prec + GUARD):
        x = mpf(x)
        if x < 2:
            raise DomainError("x must be at least 2")
        return mpmath.sqrt((x + mpmath.sqrt(x * x - 4)) / 2)


def solve_product_from_ratio(r, prec: int = DEFAULT_PREC) -> mpf:
    """``P >= 1`` solving ``2 sqrt 2 (P^3 + P^-3) = r^4 + r^-4 - 7``."""
    with mp.workprec(prec + GUARD):
        r = mpf(r)
        if r <= 0:
            raise DomainError("ratio must be positive")
        S = (r ** 4 + r ** -4 - 7) / (2 * mpmath.sqrt(2))
        if S < 2:
            if S > 2 - eps(prec - 8):
                S = mpf(2)
            else:
                raise DomainError(f"S = {mpmath.nstr(S, 8)} < 2: no real solution")
        return mpmath.cbrt((S + mpmath.sqrt(S * S - 4)) / 2)


def modular_residual(big, small, prec: int = DEFAULT_PREC) -> mpf:
    """``2 sqrt 2 (P^3 + P^-3) - (r^4 + r^-4 - 7)`` for ``P = big*small``,
    ``r = big/small``, relative to the size of the terms.
    """
    with mp.workprec(prec + GUARD):
        P = big * small
        r = big / small
        lhs = 2 * mpmath.sqrt(2) * (P ** 3 + P ** -3)
        rhs = r ** 4 + r ** -4 - 7
        return abs(lhs - rhs) / max(mpf(1), abs(lhs))


def derive_gn_pipeline(m: int, prec: int = DEFAULT_PREC, b=None) -> GnPair:
    """Run the b -> x -> r -> P pipeline for ``b_{m,7}`` (``m`` even).

    ``b`` defaults to the unit-product closed form from :func:`derive.derive_b`
    for ``(m/2, 7)``.  The outputs are certified against direct q-series
    values of ``g_{7m}`` and ``g_{m/7}``; if the direct branch misses, the
    reciprocal branch (``r -> 1/r``, ``P -> 1/P``) is tried once.
    """
    from .derive import derive_b

    m = int(m)
    if m % 2:
        raise DomainError("m must be even (b_{m,7} with m = 2k)")
    if b is None:
        b = derive_b(m // 2, 7, prec).b_value
    with mp.workprec(prec + GUARD):
        x = solve_x_from_b(b, prec)
        r = ratio_from_x(x, prec)
        P = solve_product_from_ratio(r, prec)
        g_big = qseries.class_invariant_numeric("g", 7 * m, prec)
        g_small = qseries.class_invariant_numeric("g", Fraction(m, 7), prec)
        tol = eps(prec - 64)
        for branch, rr, PP in (("direct", r, P), ("reciprocal", 1 / r, 1 / P)):
            big = mpmath.sqrt(rr * PP)
            small = mpmath.sqrt(PP / rr)
            res = max(rel_diff(big, g_big), rel_diff(small, g_small))
            if res < tol:
                return GnPair(m, big, small, rr, PP, x, mpf(b), branch, prec, res)
    raise ConsistencyError(f"pipeline for m={m}: neither branch matches the q-series invariants")
