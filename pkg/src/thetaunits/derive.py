"""Closed forms of b_{2m,n} as products of fundamental units.

For odd m, n with 2mn squarefree the field K = Q(sqrt(-2mn)) has
discriminant d = -8mn.  When every genus holds one or two classes,

    b_{2m,n}^N = prod_chi eps_chi^(-w h1 h2 / w2)

where chi runs over the genus characters with chi([Omega, n]) =
chi([Omega, 2n]) = -1, N = h/4 is their number, and (d1, d2, h1, h2, w2,
eps) come from the decomposition d = d1 d2 attached to chi.  The same
product equals (F(B0) F(B1) / (F(B2) F(B3)))^(h/4) with
F([a, Omega]) = |eta(Omega/a)|^2 / sqrt(a).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mp, mpf

from . import qseries
from .algrec import ClosedFormExpr, parse
from .bigreal import DEFAULT_PREC, GUARD, eps, rel_diff, to_decimal
from .errors import ConsistencyError, DomainError, HypothesisError
from .quadfields import (ClassData, Decomposition, IdealBasis, QForm, QuadUnit,
                         class_data, decompositions, genus_character, ideal_to_form,
                         is_squarefree)

__all__ = [
    "UnitProduct", "CharacterRow", "DerivationReport", "check_hypotheses",
    "selected_characters", "derive_b", "verify_limit_identity", "f_ratio",
    "enumerate_admissible",
]


@dataclass(frozen=True)
class UnitProduct:
    """``prod eps_i ** e_i`` with rational exponents (denominators 1 or 2)."""

    factors: tuple[tuple[QuadUnit, Fraction], ...]

    def value(self, prec: int = DEFAULT_PREC) -> mpf:
        with mp.workprec(prec + GUARD):
            out = mpf(1)
            for u, e in self.factors:
                v = u.value(prec + GUARD)
                if e.denominator == 1:
                    out *= v ** e.numerator
                else:
                    out *= mpmath.sqrt(v) ** e.numerator if e.denominator == 2 else v ** mpf(e)
            return out

    def power(self, k: int) -> "UnitProduct":
        return UnitProduct(tuple((u, e * k) for u, e in self.factors))

    def closed_form(self) -> ClosedFormExpr:
        terms = []
        for u, e in self.factors:
            base = parse(u.to_prefix())
            if e.denominator == 2:
                base = base.sqrt()
                k = e.numerator
            else:
                k = int(e)
            terms.append(base ** k)
        if not terms:
            return ClosedFormExpr.lit(1)
        if len(terms) == 1:
            return terms[0]
        return ClosedFormExpr("mul", tuple(terms))

    def __str__(self) -> str:
        return " · ".join(f"({u})^{e}" for u, e in self.factors) or "1"

    def as_dict(self) -> dict:
        return {
            "factors": [
                {"D": u.D, "x": str(u.x), "y": str(u.y), "norm": u.norm, "exponent": str(e)}
                for u, e in self.factors
            ],
            "text": str(self),
            "expr": self.closed_form().to_prefix(),
        }


@dataclass(frozen=True)
class CharacterRow:
    dec: Decomposition
    chi_n: int
    chi_2n: int

    @property
    def selected(self) -> bool:
        return self.chi_n == -1 and self.chi_2n == -1

    def as_dict(self) -> dict:
        dec = self.dec
        return {
            "d1": dec.d1, "d2": dec.d2, "h1": dec.h1, "h2": dec.h2, "w2": dec.w2,
            "eps": None if dec.eps is None else str(dec.eps),
            "chi_n": self.chi_n, "chi_2n": self.chi_2n, "selected": self.selected,
        }


@dataclass
class DerivationReport:
    m: int
    n: int
    d: int
    classes: ClassData
    characters: list[CharacterRow]
    unit_product: UnitProduct
    prec: int
    b_value: mpf
    b_numeric: mpf
    residual: mpf
    corpus_notes: list[str] = field(default_factory=list)

    @property
    def selected(self) -> list[CharacterRow]:
        return [r for r in self.characters if r.selected]

    @property
    def case(self) -> str:
        return {1: "one-class", 2: "two-class"}[self.classes.classes_per_genus]

    def as_dict(self) -> dict:
        c = self.classes
        return {
            "m": self.m, "n": self.n, "b_index": [2 * self.m, self.n], "d": self.d,
            "case": self.case,
            "class_data": {"h": c.h, "w": c.w, "num_genera": c.num_genera,
                           "classes_per_genus": c.classes_per_genus},
            "characters": [r.as_dict() for r in self.characters],
            "num_selected": len(self.selected),
            "unit_product": self.unit_product.as_dict(),
            "prec": self.prec,
            "b_closed_form": to_decimal(self.b_value, self.prec),
            "b_numeric": to_decimal(self.b_numeric, self.prec),
            "residual": mpmath.nstr(self.residual, 6),
            "corpus_notes": list(self.corpus_notes),
        }


def _ideal_forms(m: int, n: int) -> tuple[int, list[QForm]]:
    d = -8 * m * n
    forms = [ideal_to_form(IdealBasis(a, 0, d)) for a in (1, 2, n, 2 * n)]
    return d, forms


def check_hypotheses(m: int, n: int) -> ClassData:
    """Validate (m, n) and return the class data of Q(sqrt(-2mn))."""
    if int(m) != m or int(n) != n or m < 1 or n < 1:
        raise HypothesisError("m and n must be positive integers")
    m, n = int(m), int(n)
    if m % 2 == 0 or n % 2 == 0:
        raise HypothesisError(f"m={m} and n={n} must both be odd")
    if not is_squarefree(2 * m * n):
        raise HypothesisError(f"2mn = {2 * m * n} is not squarefree")
    if n == 1:
        raise HypothesisError("n = 1 is degenerate ([Omega, n] is the principal ideal)")
    if m == n:
        raise HypothesisError("m = n is excluded")
    cd = class_data(-8 * m * n)
    if cd.classes_per_genus not in (1, 2):
        raise HypothesisError(f"d={cd.d} has {cd.classes_per_genus} classes per genus (need 1 or 2)")
    return cd


def character_table(m: int, n: int) -> list[CharacterRow]:
    d, (_, _, f_n, f_2n) = _ideal_forms(m, n)
    rows = []
    for dec in decompositions(d):
        rows.append(CharacterRow(dec, genus_character(dec, f_n), genus_character(dec, f_2n)))
    return rows


def selected_characters(m: int, n: int) -> list[CharacterRow]:
    return [r for r in character_table(m, n) if r.selected]


def _unit_product(selected: list[CharacterRow]) -> UnitProduct:
    N = len(selected)
    factors = []
    for row in selected:
        e = -row.dec.exponent / N
        factors.append((row.dec.eps, e))
    return UnitProduct(tuple(factors))


def derive_b(m: int, n: int, prec: int = DEFAULT_PREC) -> DerivationReport:
    """Exact closed form of ``b_{2m,n}`` with its numeric audit."""
    cd = check_hypotheses(m, n)
    rows = character_table(m, n)
    selected = [r for r in rows if r.selected]
    if len(selected) * 4 != cd.h:
        raise HypothesisError(
            f"(m,n)=({m},{n}): {len(selected)} characters with chi([Omega,n]) = chi([Omega,2n]) = -1, "
            f"expected h/4 = {cd.h // 4}")
    up = _unit_product(selected)
    with mp.workprec(prec + GUARD):
        val = up.value(prec)
        num = qseries.b_numeric(2 * m, n, prec)
        res = abs(val - num)
    report = DerivationReport(m, n, cd.d, cd, rows, up, prec, val, num, res)
    if rel_diff(val, num) >= eps(prec - 32):
        raise ConsistencyError(
            f"unit product for b_{{{2 * m},{n}}} misses the q-series value (residual {mpmath.nstr(res, 5)})")
    report.corpus_notes = _corpus_notes(report)
    return report


def _corpus_notes(report: DerivationReport) -> list[str]:
    from .corpus import compare_class_data, load_corpus

    entry = load_corpus().get(f"class_{2 * report.m}_{report.n}")
    if entry is None:
        return []
    return compare_class_data(entry, report)


def f_ratio(m: int, n: int, prec: int = DEFAULT_PREC) -> mpf:
    """``F(B2) F(B3) / (F(B0) F(B1))`` for the ideals [Omega, a], a = 1, 2, n, 2n."""
    with mp.workprec(prec + GUARD):
        root = mpmath.sqrt(2 * m * n)

        def F(a: int) -> mpf:
            return qseries.eta_imag(root / a, prec + 16) ** 2 / mpmath.sqrt(a)

        return F(n) * F(2 * n) / (F(1) * F(2))


def verify_limit_identity(m: int, n: int, prec: int = DEFAULT_PREC) -> mpf:
    """``|prod eps^(-w h1 h2 / w2) - (F-ratio)^(-h/4)|``.

    The left side is the unit product over the selected characters
    evaluated from exact units; the right side uses eta values only.
    """
    cd = check_hypotheses(m, n)
    selected = selected_characters(m, n)
    if len(selected) * 4 != cd.h:
        raise HypothesisError(f"(m,n)=({m},{n}) has {len(selected)} selected characters, need {cd.h // 4}")
    N = len(selected)
    with mp.workprec(prec + GUARD):
        lhs = _unit_product(selected).power(N).value(prec)
        rhs = f_ratio(m, n, prec) ** (-(cd.h // 4))
        return abs(lhs - rhs)


def enumerate_admissible(bound: int, canonical: bool = True,
                         extended: bool = False) -> list[tuple[int, int, str]]:
    """Pairs (m, n) with 8mn <= bound satisfying the unit-product hypotheses.

    By default only fields with exactly four genera are kept (m, n distinct
    odd primes), i.e. h = 4 in the one-class case and h = 8 in the two-class
    case.  ``extended=True`` also admits more genera, where the same identity
    holds with N = h/4 selected characters.  ``canonical=True`` keeps
    m > n >= 3; otherwise every odd m >= 1, n >= 3, m != n is scanned.
    Results are sorted by (mn, m).
    """
    if bound < 8:
        raise DomainError("bound must be at least 8")
    out = []
    limit = bound // 8
    for n in range(3, limit + 1, 2):
        m_start = n + 2 if canonical else 1
        for m in range(m_start, limit // n + 1, 2):
            if m == n or not is_squarefree(2 * m * n):
                continue
            try:
                cd = check_hypotheses(m, n)
            except HypothesisError:
                continue
            if not extended and cd.num_genera != 4:
                continue
            sel = selected_characters(m, n)
            if sel and len(sel) * 4 == cd.h:
                out.append((m, n, "one-class" if cd.classes_per_genus == 1 else "two-class"))
    out.sort(key=lambda t: (t[0] * t[1], t[0]))
    return out
