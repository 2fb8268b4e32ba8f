"""High-precision q-series: Euler products, Ramanujan's theta functions,
Dedekind eta on the imaginary axis and the theta quotients built from them.

Every public function takes ``prec`` (bits) and returns an ``mpf`` accurate
to ``2**-(prec - 32)`` relative error.  Internally work happens at
``prec + GUARD`` bits.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .bigreal import DEFAULT_PREC, GUARD, as_fraction, eps, rel_diff, to_mpf
from .errors import DomainError, PrecisionExhaustedError

__all__ = [
    "InvariantKind", "Nome", "qpochhammer_inf", "euler_terms", "pentagonal_qq",
    "theta_phi", "theta_psi", "phi_neg", "psi_neg", "theta_phi_sum", "theta_psi_sum",
    "eta_imag", "b_numeric", "b_representations", "a_numeric", "a_representations", "class_invariant_numeric",
]

MIN_PREC = 64


class InvariantKind(enum.Enum):
    g = "g"
    G = "G"


class Nome:
    """The nome ``q = exp(-pi sqrt(m/n))`` for rational ``m`` and integer ``n``."""

    def __init__(self, m, n: int, prec: int = DEFAULT_PREC):
        self.m = as_fraction(m)
        self.n = int(n)
        if self.m <= 0 or self.n < 1:
            raise DomainError("nome needs m > 0 and n >= 1")
        self.prec = prec
        with mp.workprec(prec + GUARD):
            self.q = mpmath.exp(-mpmath.pi * mpmath.sqrt(to_mpf(self.m / self.n)))

    def __repr__(self) -> str:
        return f"Nome(m={self.m}, n={self.n}, q={mpmath.nstr(self.q, 15)})"


def _check_prec(prec: int) -> None:
    if prec < MIN_PREC:
        raise DomainError(f"precision must be at least {MIN_PREC} bits, got {prec}")


def euler_terms(a, q, prec: int) -> int:
    """Number of factors of ``(a; q)_inf`` needed for a tail below ``2**-(prec+16)``.

    The tail satisfies ``sum_{k>=K} |a| q^k <= |a| q^K / (1 - q)``, so K is the
    first index with ``K ln(1/q) > (prec+16) ln 2 + ln(1/(1-q)) + ln max(1, |a|)``.
    """
    qf = float(q)
    if qf <= 0.0:
        return 1
    af = max(1.0, abs(float(a)))
    lnq = -math.log(qf)
    bound = (prec + 16) * math.log(2) - math.log1p(-qf) + math.log(af)
    return max(1, int(bound / lnq) + 1)


def qpochhammer_inf(a, q, prec: int = DEFAULT_PREC) -> mpf:
    """``(a; q)_inf = prod_{k>=1} (1 - a q^(k-1))`` for ``0 < q < 1``."""
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        a = to_mpf(a)
        q = to_mpf(q)
        if not (0 < q < 1):
            raise DomainError(f"qpochhammer_inf needs 0 < q < 1, got {mpmath.nstr(q, 8)}")
        if a == 0:
            return mpf(1)
        K = euler_terms(a, q, prec)
        prod = mpf(1)
        t = a
        for _ in range(K):
            prod *= 1 - t
            t *= q
        if prod == 0:
            raise DomainError("product vanishes (a is a non-positive power of q)")
        return prod


def pentagonal_qq(q, prec: int = DEFAULT_PREC) -> mpf:
    """``(q; q)_inf`` via Euler's pentagonal number series."""
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        q = to_mpf(q)
        if not (0 < q < 1):
            raise DomainError("pentagonal_qq needs 0 < q < 1")
        lnq = -float(mpmath.log(q))
        cutoff = (prec + 16) * math.log(2)
        s = mpf(1)
        k = 1
        while True:
            e1 = k * (3 * k - 1) // 2
            if e1 * lnq > cutoff:
                break
            term = q ** e1 + q ** (e1 + k)
            s += -term if k % 2 else term
            k += 1
        return s


def _qq(q, prec: int) -> mpf:
    """``(q; q)_inf``, sparse series unless q is tiny."""
    if float(q) > 2.0 ** (-prec / 64):
        return pentagonal_qq(q, prec)
    return qpochhammer_inf(q, q, prec)


# -- theta functions ----------------------------------------------------------

def _check_q(q) -> mpf:
    q = to_mpf(q)
    if not (-1 < q < 1):
        raise DomainError("theta functions need |q| < 1")
    return q


def theta_phi_sum(q, prec: int = DEFAULT_PREC) -> mpf:
    """``sum_n q^(n^2)`` by direct summation."""
    with mp.workprec(prec + GUARD):
        q = _check_q(q)
        s = mpf(1)
        if q == 0:
            return s
        tiny = eps(prec + 16)
        n = 1
        while True:
            t = q ** (n * n)
            if abs(t) < tiny:
                return s
            s += 2 * t
            n += 1


def theta_psi_sum(q, prec: int = DEFAULT_PREC) -> mpf:
    """``sum_{n>=0} q^(n(n+1)/2)`` by direct summation."""
    with mp.workprec(prec + GUARD):
        q = _check_q(q)
        s = mpf(1)
        if q == 0:
            return s
        tiny = eps(prec + 16)
        n = 1
        while True:
            t = q ** (n * (n + 1) // 2)
            if abs(t) < tiny:
                return s
            s += t
            n += 1


def theta_phi(q, prec: int = DEFAULT_PREC, cross_check: bool = False) -> mpf:
    """Ramanujan's ``phi(q) = f(q, q)`` from ``(-q; q^2)^2 (q^2; q^2)``."""
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        q = _check_q(q)
        if q == 0:
            return mpf(1)
        q2 = q * q
        val = qpochhammer_inf(-q, q2, prec) ** 2 * qpochhammer_inf(q2, q2, prec)
        if cross_check:
            _cross(val, theta_phi_sum(q, prec), prec, "phi")
        return val


def theta_psi(q, prec: int = DEFAULT_PREC, cross_check: bool = False) -> mpf:
    """Ramanujan's ``psi(q) = f(q, q^3)`` from ``(q^2; q^2) / (q; q^2)``."""
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        q = _check_q(q)
        if q == 0:
            return mpf(1)
        q2 = q * q
        val = qpochhammer_inf(q2, q2, prec) / qpochhammer_inf(q, q2, prec)
        if cross_check:
            _cross(val, theta_psi_sum(q, prec), prec, "psi")
        return val


def phi_neg(q, prec: int = DEFAULT_PREC, cross_check: bool = False) -> mpf:
    """``phi(-q)``."""
    with mp.workprec(prec + GUARD):
        return theta_phi(-to_mpf(q), prec, cross_check)


def psi_neg(q, prec: int = DEFAULT_PREC, cross_check: bool = False) -> mpf:
    """``psi(-q)``."""
    with mp.workprec(prec + GUARD):
        return theta_psi(-to_mpf(q), prec, cross_check)


def _cross(a: mpf, b: mpf, prec: int, what: str) -> None:
    if rel_diff(a, b) >= eps(prec - 16):
        raise PrecisionExhaustedError(f"{what}: product and sum forms disagree")


# -- eta and quotients --------------------------------------------------------

def eta_imag(t, prec: int = DEFAULT_PREC, method: str = "auto") -> mpf:
    """Dedekind eta at ``z = i t``: ``exp(-pi t / 12) (e^{-2 pi t}; e^{-2 pi t})_inf``.

    ``method`` is ``"auto"``, ``"pentagonal"`` or ``"product"``.
    """
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        t = to_mpf(t)
        if t <= 0:
            raise DomainError("eta_imag needs t > 0")
        q = mpmath.exp(-2 * mpmath.pi * t)
        if method == "auto":
            qq = _qq(q, prec)
        elif method == "pentagonal":
            qq = pentagonal_qq(q, prec)
        elif method == "product":
            qq = qpochhammer_inf(q, q, prec)
        else:
            raise ValueError(f"unknown method {method!r}")
        return mpmath.exp(-mpmath.pi * t / 12) * qq


def _eta_sqrt_arg(r: Fraction, prec: int) -> mpf:
    """``eta(i * sqrt(r))`` for a positive rational ``r``."""
    return eta_imag(mpmath.sqrt(to_mpf(r)), prec)


def _b_theta(m: Fraction, n: int, prec: int) -> mpf:
    q = Nome(m, n, prec).q
    qn = q ** n
    num = psi_neg(qn, prec) ** 2 * phi_neg(qn * qn, prec) ** 2
    den = psi_neg(q, prec) ** 2 * phi_neg(q * q, prec) ** 2
    return n * q ** (mpf(n - 1) / 4) * num / den


def _b_eta(m: Fraction, n: int, prec: int) -> mpf:
    # eta(i sqrt(r)/2) = eta(i sqrt(r/4))
    num = _eta_sqrt_arg(m * n / 4, prec) ** 2 * _eta_sqrt_arg(m * n, prec) ** 2
    den = _eta_sqrt_arg(m / n / 4, prec) ** 2 * _eta_sqrt_arg(m / n, prec) ** 2
    return n * num / den


def _b_mixed(m: Fraction, n: int, prec: int) -> mpf:
    num = _eta_sqrt_arg(m * n / 4, prec) ** 4 * class_invariant_numeric(InvariantKind.g, m / n, prec) ** 2
    den = _eta_sqrt_arg(m / n / 4, prec) ** 4 * class_invariant_numeric(InvariantKind.g, m * n, prec) ** 2
    return n * num / den


def b_representations(m, n: int, prec: int = DEFAULT_PREC) -> dict[str, mpf]:
    """The theta, mixed eta/g and pure eta forms of ``b_{m,n}``."""
    m = as_fraction(m)
    _check_mn(m, n)
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        return {
            "theta": _b_theta(m, n, prec),
            "mixed": _b_mixed(m, n, prec),
            "eta": _b_eta(m, n, prec),
        }


def _check_mn(m: Fraction, n: int) -> None:
    if m <= 0:
        raise DomainError("m must be positive")
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")


def b_numeric(m, n: int, prec: int = DEFAULT_PREC, check: bool = False) -> mpf:
    """``b_{m,n} = n q^((n-1)/4) psi^2(-q^n) phi^2(-q^{2n}) / (psi^2(-q) phi^2(-q^2))``
    at ``q = exp(-pi sqrt(m/n))``.

    With ``check=True`` the two eta-quotient forms are evaluated as well and
    all three must agree to ``prec - 32`` bits.
    """
    m = as_fraction(m)
    _check_mn(m, n)
    _check_prec(prec)
    n = int(n)
    if n == 1:
        return mpf(1)
    if not check:
        with mp.workprec(prec + GUARD):
            return _b_theta(m, n, prec)
    reps = b_representations(m, n, prec)
    _agree_all(reps, prec - 32, f"b_{{{m},{n}}}")
    return reps["theta"]


def _agree_all(reps: dict[str, mpf], bits: int, label: str) -> None:
    vals = list(reps.items())
    ref_name, ref = vals[0]
    for name, v in vals[1:]:
        if rel_diff(ref, v) >= eps(bits):
            raise PrecisionExhaustedError(
                f"{label}: {ref_name} and {name} representations disagree "
                f"(rel diff {mpmath.nstr(rel_diff(ref, v), 5)})")


def _a_quot(m: Fraction, n: int, prec: int, psi, phi) -> mpf:
    q = Nome(m, n, prec).q
    qn = q ** n
    return (n * q ** (mpf(n - 1) / 4) * psi(qn, prec) ** 2 * phi(-qn * qn, prec) ** 2
            / (psi(q, prec) ** 2 * phi(-q * q, prec) ** 2))


def a_representations(m, n: int, prec: int = DEFAULT_PREC) -> dict[str, mpf]:
    """``a_{m,n}`` from theta products and from direct theta summation."""
    m = as_fraction(m)
    _check_mn(m, n)
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        return {
            "product": _a_quot(m, int(n), prec, theta_psi, theta_phi),
            "sum": _a_quot(m, int(n), prec, theta_psi_sum, theta_phi_sum),
        }


def a_numeric(m, n: int, prec: int = DEFAULT_PREC, check: bool = False) -> mpf:
    """``a_{m,n}``: as ``b_{m,n}`` but with ``psi`` at ``+q``.

    ``check=True`` compares against direct theta summation.
    """
    m = as_fraction(m)
    _check_mn(m, n)
    _check_prec(prec)
    n = int(n)
    if n == 1:
        return mpf(1)
    if not check:
        with mp.workprec(prec + GUARD):
            return _a_quot(m, n, prec, theta_psi, theta_phi)
    reps = a_representations(m, n, prec)
    _agree_all(reps, prec - 32, f"a_{{{m},{n}}}")
    return reps["product"]


def class_invariant_numeric(kind, n, prec: int = DEFAULT_PREC) -> mpf:
    """Weber-Ramanujan invariant ``g_n`` or ``G_n`` at ``q = exp(-pi sqrt n)``:
    ``2^(-1/4) q^(-1/24) (-+q; q^2)_inf``.
    """
    kind = InvariantKind(kind) if not isinstance(kind, InvariantKind) else kind
    n = as_fraction(n)
    if n <= 0:
        raise DomainError("class invariants need n > 0")
    _check_prec(prec)
    with mp.workprec(prec + GUARD):
        s = mpmath.pi * mpmath.sqrt(to_mpf(n))
        q = mpmath.exp(-s)
        a = q if kind is InvariantKind.g else -q
        return mpmath.exp(s / 24 - mpmath.ln2 / 4) * qpochhammer_inf(a, q * q, prec)
