"""Binary quadratic forms, genus characters and real-quadratic units.

Discriminants are plain ``int`` values.  Forms use the standard convention
``a x^2 + b x y + c y^2`` with discriminant ``b^2 - 4ac``; ideals ``[a, b + Omega]``
whose basis follows the usual split on ``d mod 4`` are converted with
:func:`ideal_to_form`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional

import mpmath
from mpmath import mp, mpf

from . import _kernels
from .errors import DomainError, NotFoundError

__all__ = [
    "QForm", "IdealBasis", "QuadUnit", "ClassData", "Decomposition",
    "kronecker_symbol", "is_discriminant", "is_fundamental", "squarefree_kernel",
    "reduced_forms", "class_number", "class_number_analytic", "roots_of_unity",
    "fundamental_unit", "prime_discriminants", "decompositions", "ideal_to_form",
    "genus_character", "genera_structure", "class_data",
]


# -- small integer helpers ---------------------------------------------------

def _factor(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_kernel(n: int) -> int:
    """Squarefree part of ``n`` (sign kept)."""
    k = 1
    for p, e in _factor(n).items():
        if e % 2:
            k *= p
    return k if n > 0 else -k


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in _factor(n).values())


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol ``(D | n)`` for ``n >= 1``."""
    if n < 1:
        raise DomainError("kronecker_symbol needs n >= 1")
    res = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            res = -res
    a, b = D % n, n
    while b > 1:
        if a == 0:
            return 0
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                res = -res
        if a % 4 == 3 and b % 4 == 3:
            res = -res
        a, b = b % a, a
    return res


def is_discriminant(d: int) -> bool:
    return d != 0 and d % 4 in (0, 1)


def is_fundamental(d: int) -> bool:
    """True iff ``d`` is the discriminant of a quadratic field."""
    if d in (0, 1) or math.isqrt(abs(d)) ** 2 == d:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def _require_disc(d: int) -> None:
    if not is_discriminant(d):
        raise DomainError(f"{d} is not a discriminant (must be nonzero and 0 or 1 mod 4)")


# -- domain types ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class QForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    def reduce(self) -> "QForm":
        """Reduced form properly equivalent to this positive definite form."""
        a, b, c = self.a, self.b, self.c
        if self.disc >= 0 or a <= 0:
            raise DomainError("reduction is only implemented for positive definite forms")
        while True:
            # normalise b into (-a, a]
            if not (-a < b <= a):
                k = (a - b) // (2 * a)
                c = a * k * k + b * k + c
                b = b + 2 * a * k
            if a > c:
                a, b, c = c, -b, a
                continue
            if a == c and b < 0:
                b = -b
            return QForm(a, b, c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class IdealBasis:
    """Primitive ideal ``[a, b + Omega]`` of the maximal order of discriminant ``d``."""

    a: int
    b: int
    d: int

    def omega_norm_trace(self) -> tuple[int, int]:
        """(norm, trace) of ``Omega``."""
        if self.d % 4 == 0:
            return -self.d // 4, 0
        return (1 - self.d) // 4, 1

    def norm_of_generator(self) -> int:
        """Norm of ``b + Omega``."""
        nm, tr = self.omega_norm_trace()
        return self.b * self.b + tr * self.b + nm


@dataclass(frozen=True)
class QuadUnit:
    """Unit ``x + y sqrt(D)`` of a real quadratic field, ``D`` squarefree."""

    D: int
    x: Fraction
    y: Fraction

    @property
    def norm(self) -> int:
        nm = self.x * self.x - self.D * self.y * self.y
        if nm.denominator != 1 or abs(nm) != 1:
            raise ArithmeticError(f"{self} is not a unit")
        return int(nm)

    def value(self, prec: int = 256) -> mpf:
        with mp.workprec(prec + 16):
            return (mpf(self.x.numerator) / self.x.denominator
                    + mpf(self.y.numerator) / self.y.denominator * mpmath.sqrt(self.D))

    def to_prefix(self) -> str:
        """Closed form in the corpus prefix notation."""
        def lit(f: Fraction) -> str:
            return str(f.numerator) if f.denominator == 1 else f"(div {f.numerator} {f.denominator})"
        rad = f"(sqrt {self.D})" if self.y == 1 else f"(mul {lit(self.y)} (sqrt {self.D}))"
        return f"(add {lit(self.x)} {rad})"

    def __str__(self) -> str:
        def s(f: Fraction) -> str:
            return str(f) if f.denominator == 1 else f"({f})"
        ys = "" if self.y == 1 else s(self.y)
        return f"{s(self.x)}+{ys}√{self.D}"


@dataclass(frozen=True)
class Decomposition:
    """Factorisation ``d = d1 * d2`` attached to one genus character."""

    d1: int
    d2: int
    h1: int
    h2: int
    w2: int
    eps: Optional[QuadUnit]

    @property
    def trivial(self) -> bool:
        return self.d1 == 1

    @property
    def exponent(self) -> Fraction:
        """``w * h1 * h2 / w2`` with ``w = 2`` for the parent field."""
        return Fraction(2 * self.h1 * self.h2, self.w2)


@dataclass(frozen=True)
class ClassData:
    d: int
    h: int
    w: int
    num_genera: int
    classes_per_genus: int
    forms: tuple[QForm, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "d": self.d, "h": self.h, "w": self.w,
            "num_genera": self.num_genera, "classes_per_genus": self.classes_per_genus,
            "reduced_forms": [[f.a, f.b, f.c] for f in self.forms],
        }


# -- class numbers -----------------------------------------------------------

def reduced_forms(d: int) -> list[QForm]:
    """Reduced primitive forms of discriminant ``d < 0``, sorted lexicographically."""
    _require_disc(d)
    if d > 0:
        raise DomainError("reduced_forms: indefinite forms (d > 0) are not supported")
    return [QForm(int(a), int(b), int(c)) for a, b, c in _kernels.reduced_forms(d)]


def roots_of_unity(d: int) -> int:
    if d == -3:
        return 6
    if d == -4:
        return 4
    return 2


def class_number_analytic(d: int) -> int:
    """Class number of a fundamental discriminant from the finite L-value sums."""
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    if d < 0:
        s = _kernels.char_sum(d)
        num = -roots_of_unity(d) * s
        h, r = divmod(num, 2 * abs(d))
        if r:
            raise ArithmeticError(f"character sum for {d} is not divisible")
        return h
    log_eps = math.log(float(fundamental_unit(d).value(64)))
    approx = -_kernels.log_sin_sum(d) / (2 * log_eps)
    h = round(approx)
    if abs(approx - h) >= 0.25:
        approx = _class_number_real_mp(d)
        h = round(approx)
        if abs(approx - h) >= 0.25:
            raise ArithmeticError(f"analytic class number for {d} not near an integer: {approx}")
    return int(h)


def _class_number_real_mp(d: int, prec: int = 128) -> float:
    with mp.workprec(prec):
        s = mpf(0)
        for a in range(1, d):
            chi = kronecker_symbol(d, a)
            if chi:
                s += chi * mpmath.log(mpmath.sinpi(mpf(a) / d))
        return float(-s / (2 * mpmath.log(fundamental_unit(d).value(prec))))


@lru_cache(maxsize=4096)
def class_number(d: int) -> int:
    """Class number ``h(d)``.

    For ``d < 0`` this counts reduced forms and, when ``d`` is fundamental,
    cross-checks against the character-sum formula.  For ``d > 0`` it is the
    analytic value (wide class number) and ``d`` must be fundamental.
    """
    _require_disc(d)
    if d < 0:
        h = len(_kernels.reduced_forms(d))
        if is_fundamental(d):
            h2 = class_number_analytic(d)
            if h2 != h:
                raise ArithmeticError(f"class number mismatch for {d}: forms {h}, analytic {h2}")
        return h
    return class_number_analytic(d)


# -- units -------------------------------------------------------------------

@lru_cache(maxsize=1024)
def fundamental_unit(d: int) -> QuadUnit:
    """Fundamental unit (> 1) of the real quadratic field of discriminant ``d``.

    Runs the exact continued fraction of the ring generator ``omega``
    (``sqrt(d/4)`` or ``(1 + sqrt d)/2``) and returns ``p - q * omega'`` for
    the first convergent ``p/q`` whose norm form takes the value +-1.
    """
    if d <= 0 or not is_fundamental(d):
        raise DomainError(f"fundamental_unit needs a positive fundamental discriminant, got {d}")
    for p, q in _convergents(d):
        if d % 4 == 0:
            D = d // 4
            x, y = Fraction(p), Fraction(q)
        else:
            D = d
            x, y = Fraction(2 * p - q, 2), Fraction(q, 2)
        if abs(x * x - D * y * y) == 1:
            return QuadUnit(D, x, y)
    raise AssertionError("unreachable: continued fraction is periodic")  # pragma: no cover


def _convergents(d: int):
    """Convergents of ``omega`` for the maximal order of discriminant ``d > 0``."""
    if d % 4 == 0:
        N, P, Q = d // 4, 0, 1
    else:
        N, P, Q = d, 1, 2
    s = math.isqrt(N)
    p0, p1 = 1, 0
    q0, q1 = 0, 1
    while True:
        a = (P + s) // Q
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield p0, q0
        P = a * Q - P
        Q = (N - P * P) // Q


# -- genus theory ------------------------------------------------------------

def prime_discriminants(d: int) -> list[int]:
    """Prime discriminants whose product is the fundamental discriminant ``d``."""
    if not is_fundamental(d):
        raise DomainError(f"{d} is not fundamental")
    out = []
    rest = d
    for p in sorted(_factor(d)):
        if p == 2:
            continue
        ps = p if p % 4 == 1 else -p
        out.append(ps)
        rest //= ps
    if rest != 1:
        out.insert(0, rest)  # one of -4, 8, -8
    return out


def _w(d: int) -> int:
    return roots_of_unity(d)


def decompositions(d: int) -> list[Decomposition]:
    """All ``d = d1 * d2`` with ``d1 > 0`` a product of prime discriminants.

    The trivial pair ``(1, d)`` comes first; the rest are sorted by ``d1``.
    """
    if d >= 0:
        raise DomainError("decompositions expects a negative discriminant")
    primes = prime_discriminants(d)
    seen = set()
    out = []
    for r in range(len(primes) + 1):
        for sub in combinations(primes, r):
            d1 = math.prod(sub)
            if d1 <= 0 or d1 in seen:
                continue
            seen.add(d1)
            d2 = d // d1
            if d1 == 1:
                out.append(Decomposition(1, d, 1, class_number(d), _w(d), None))
            else:
                out.append(Decomposition(d1, d2, class_number(d1), class_number(d2), _w(d2),
                                         fundamental_unit(d1)))
    out.sort(key=lambda x: x.d1)
    return out


def ideal_to_form(ideal: IdealBasis, d: Optional[int] = None) -> QForm:
    """Form ``N(x a + y (b + Omega)) / a`` attached to the ideal ``[a, b + Omega]``."""
    d = ideal.d if d is None else d
    if d != ideal.d:
        raise DomainError("ideal and discriminant disagree")
    nrm = ideal.norm_of_generator()
    if ideal.a <= 0 or nrm % ideal.a:
        raise DomainError(f"{ideal.a} does not divide the norm {nrm} of b + Omega")
    _, tr = ideal.omega_norm_trace()
    f = QForm(ideal.a, 2 * ideal.b + tr, nrm // ideal.a)
    assert f.disc == d
    return f


def genus_character(dec: Decomposition, f: QForm, window: int = 8) -> int:
    """Value of the genus character of ``dec`` on the class of ``f``.

    Uses ``(d1 | r)`` for the smallest positive ``r`` represented by ``f``
    with ``gcd(r, d1) = 1``; the search window over ``|x|, |y|`` doubles on
    failure up to 64.
    """
    if f.disc != dec.d1 * dec.d2:
        raise DomainError("form and decomposition have different discriminants")
    if dec.trivial:
        return 1
    r = _coprime_value(f, dec.d1, window)
    return kronecker_symbol(dec.d1, r)


def _coprime_value(f: QForm, m: int, window: int) -> int:
    while window <= 64:
        vals = [f(x, y) for x in range(-window, window + 1) for y in range(-window, window + 1)]
        good = [v for v in vals if v > 0 and math.gcd(v, m) == 1]
        if good:
            return min(good)
        window *= 2
    raise NotFoundError(f"no value of {f} coprime to {m} in window")


def represented_coprime_values(f: QForm, m: int, window: int = 8) -> list[int]:
    """All positive values of ``f`` on ``|x|, |y| <= window`` coprime to ``m``."""
    vals = {f(x, y) for x in range(-window, window + 1) for y in range(-window, window + 1)}
    return sorted(v for v in vals if v > 0 and math.gcd(v, m) == 1)


def genera_structure(d: int) -> tuple[int, int]:
    """(number of genera, classes per genus) for a negative fundamental ``d``."""
    mu = len(prime_discriminants(d))
    g = 2 ** (mu - 1)
    return g, class_number(d) // g


def class_data(d: int) -> ClassData:
    if d >= 0:
        raise DomainError("class_data is implemented for negative discriminants")
    _require_disc(d)
    forms = tuple(reduced_forms(d))
    if is_fundamental(d):
        ng, cpg = genera_structure(d)
    else:
        ng, cpg = 0, 0
    return ClassData(d, len(forms), roots_of_unity(d), ng, cpg, forms)
