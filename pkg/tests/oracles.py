"""Independent reference computations used by the test suite.

Each oracle takes a different route from the package code: mpmath's own
q-Pochhammer and Jacobi theta, Euler's criterion, exhaustive search over
small integers, or mpmath's PSLQ.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath import mp, mpf


def qp(a, q, prec=256):
    with mp.workprec(prec + 32):
        return mpmath.qp(mpf(a), mpf(q))


def phi(q, prec=256):
    """sum q^(n^2) as the Jacobi theta_3(0, q)."""
    with mp.workprec(prec + 32):
        return mpmath.jtheta(3, 0, mpf(q))


def psi(q, prec=256):
    """sum q^(n(n+1)/2) via theta_2(0, q^(1/2)) = 2 q^(1/8) psi(q)."""
    with mp.workprec(prec + 32):
        q = mpf(q)
        if q < 0:
            # theta_2 wants a real nome; psi(-q) from its even/odd split instead
            return _psi_direct(q)
        return mpmath.jtheta(2, 0, mpmath.sqrt(q)) / (2 * q ** mpf(0.125))


def _psi_direct(q):
    s, n = mpf(0), 0
    while True:
        t = q ** (n * (n + 1) // 2)
        if abs(t) < mpf(2) ** (-mp.prec):
            return s
        s += t
        n += 1


def eta_imag(t, prec=256):
    """eta(i t) from mpmath.qp."""
    with mp.workprec(prec + 32):
        t = mpf(t)
        q = mpmath.exp(-2 * mpmath.pi * t)
        return mpmath.exp(-mpmath.pi * t / 12) * mpmath.qp(q, q)


def g_invariant(n, prec=256):
    """2^(-1/4) q^(-1/24) (q; q^2)_inf at q = exp(-pi sqrt n)."""
    with mp.workprec(prec + 32):
        n = mpf(Fraction(n).numerator) / Fraction(n).denominator
        q = mpmath.exp(-mpmath.pi * mpmath.sqrt(n))
        return mpf(2) ** mpf(-0.25) * q ** (mpf(-1) / 24) * mpmath.qp(q, q * q)


def legendre(a: int, p: int) -> int:
    """(a|p) for an odd prime p by Euler's criterion."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def class_number_brute(d: int) -> int:
    """Count reduced primitive forms of discriminant d < 0 in pure Python."""
    h = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                h += 1
        a += 1
    return h


def pell_unit(d: int, limit: int = 300000):
    """Smallest unit > 1 of the order of discriminant d > 0 by search over y,
    or None when y exceeds ``limit``.

    Returns (x, y) with eps = x + y sqrt(d/4) for d = 0 mod 4 and
    eps = x + y sqrt(d) with half-integer x, y for d = 1 mod 4.
    """
    if d % 4 == 0:
        D = d // 4
        y = 1
        while y <= limit:
            for s in (-1, 1):
                x2 = D * y * y + s
                x = math.isqrt(x2)
                if x > 0 and x * x == x2:
                    return Fraction(x), Fraction(y)
            y += 1
        return None
    u = 1
    while u <= 2 * limit:
        for s in (-4, 4):
            t2 = d * u * u + s
            t = math.isqrt(t2)
            if t > 0 and t * t == t2:
                return Fraction(t, 2), Fraction(u, 2)
        u += 1
    return None


def findpoly(x, deg, prec=512, maxcoeff=10**12):
    """Integer polynomial via mpmath's PSLQ, ascending coefficients, or None."""
    with mp.workprec(prec):
        c = mpmath.findpoly(x, deg, maxcoeff=maxcoeff)
    if c is None:
        return None
    c = [int(v) for v in reversed(c)]
    if c[-1] < 0:
        c = [-v for v in c]
    return c


def is_lll_reduced(rows, delta=Fraction(3, 4)) -> bool:
    """Size reduction and Lovasz conditions in exact rational arithmetic."""
    n = len(rows)
    bstar, mu = [], [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in rows[i]]
        for j in range(i):
            bj = bstar[j]
            mu[i][j] = sum(Fraction(a) * b for a, b in zip(rows[i], bj)) / sum(b * b for b in bj)
            v = [a - mu[i][j] * b for a, b in zip(v, bj)]
        bstar.append(v)
    norms = [sum(x * x for x in v) for v in bstar]
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


def gram_det(rows) -> Fraction:
    """det(B B^T) by exact Gaussian elimination."""
    n = len(rows)
    G = [[Fraction(sum(a * b for a, b in zip(rows[i], rows[j]))) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if G[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            G[c], G[piv] = G[piv], G[c]
            det = -det
        det *= G[c][c]
        for r in range(c + 1, n):
            f = G[r][c] / G[c][c]
            G[r] = [x - f * y for x, y in zip(G[r], G[c])]
    return det
