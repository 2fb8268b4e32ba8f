"""Closed-form expressions, integer LLL and minimal-polynomial recognition.

Closed forms are small expression trees written in a prefix notation::

    (pow (sub (sqrt 2) 1) 2)          # (sqrt 2 - 1)^2
    (mul (sub (mul 16 (sqrt 23)) (mul 29 (sqrt 7))) ...)

Operators: ``add``, ``sub``, ``mul``, ``div`` (n-ary for add/mul), ``neg``,
``sqrt`` and ``pow`` whose exponent must be an integer literal.  Leaves are
arbitrary-size integers.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import mpmath
from mpmath import mp, mpf

from .bigreal import eps
from .errors import DomainError, NotFoundError

__all__ = [
    "ClosedFormExpr", "parse", "IntPoly", "eval_closed_form", "lll_reduce",
    "min_poly", "is_unit_poly",
]

_OPS = {"add", "sub", "mul", "div", "neg", "sqrt", "pow"}


@dataclass(frozen=True)
class ClosedFormExpr:
    op: str                      # "int" for leaves
    args: tuple = ()
    value: int = 0

    # construction helpers
    @classmethod
    def lit(cls, v: int) -> "ClosedFormExpr":
        return cls("int", (), int(v))

    def __add__(self, o): return ClosedFormExpr("add", (self, _wrap(o)))
    def __sub__(self, o): return ClosedFormExpr("sub", (self, _wrap(o)))
    def __mul__(self, o): return ClosedFormExpr("mul", (self, _wrap(o)))
    def __truediv__(self, o): return ClosedFormExpr("div", (self, _wrap(o)))
    def __neg__(self): return ClosedFormExpr("neg", (self,))

    def __pow__(self, k: int):
        return ClosedFormExpr("pow", (self, ClosedFormExpr.lit(k)))

    def sqrt(self) -> "ClosedFormExpr":
        return ClosedFormExpr("sqrt", (self,))

    @property
    def depth(self) -> int:
        if self.op == "int":
            return 0
        return 1 + max(a.depth for a in self.args)

    def to_prefix(self) -> str:
        if self.op == "int":
            return str(self.value)
        return "(" + " ".join([self.op] + [a.to_prefix() for a in self.args]) + ")"

    __str__ = to_prefix

    def evaluate(self, prec: int = 256) -> mpf:
        return eval_closed_form(self, prec)


def _wrap(o) -> ClosedFormExpr:
    return o if isinstance(o, ClosedFormExpr) else ClosedFormExpr.lit(o)


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse(text: str) -> ClosedFormExpr:
    """Parse the prefix notation into a :class:`ClosedFormExpr`."""
    tokens = _TOKEN.findall(text)
    pos = 0

    def node() -> ClosedFormExpr:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of expression")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                raise ValueError("unexpected end of expression")
            op = tokens[pos]
            pos += 1
            if op not in _OPS:
                raise ValueError(f"unknown operator {op!r}")
            args = []
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(node())
            if pos >= len(tokens):
                raise ValueError("missing ')'")
            pos += 1
            _check_arity(op, args)
            return ClosedFormExpr(op, tuple(args))
        if tok == ")":
            raise ValueError("unexpected ')'")
        try:
            return ClosedFormExpr.lit(int(tok))
        except ValueError:
            raise ValueError(f"bad literal {tok!r}") from None

    expr = node()
    if pos != len(tokens):
        raise ValueError("trailing tokens after expression")
    return expr


def _check_arity(op: str, args: list) -> None:
    n = len(args)
    if op in ("neg", "sqrt") and n != 1:
        raise ValueError(f"{op} takes one argument")
    if op in ("sub", "div", "pow") and n != 2:
        raise ValueError(f"{op} takes two arguments")
    if op in ("add", "mul") and n < 2:
        raise ValueError(f"{op} takes at least two arguments")
    if op == "pow" and args[1].op != "int":
        raise ValueError("pow exponent must be an integer literal")


def eval_closed_form(e: Union[ClosedFormExpr, str], prec: int = 256) -> mpf:
    """Value of ``e`` to within ``2**-(prec - 8*depth)``; evaluated with
    ``8*depth + 16`` guard bits so the result is in fact good to ``prec``
    bits unless cancellation is extreme.
    """
    if isinstance(e, str):
        e = parse(e)
    with mp.workprec(prec + 8 * e.depth + 16):
        return _ev(e)


def _ev(e: ClosedFormExpr) -> mpf:
    op = e.op
    if op == "int":
        return mpf(e.value)
    if op == "add":
        return mpmath.fsum(_ev(a) for a in e.args)
    if op == "mul":
        out = mpf(1)
        for a in e.args:
            out *= _ev(a)
        return out
    if op == "sub":
        return _ev(e.args[0]) - _ev(e.args[1])
    if op == "neg":
        return -_ev(e.args[0])
    if op == "div":
        den = _ev(e.args[1])
        if den == 0:
            raise ZeroDivisionError(f"division by zero in {e}")
        return _ev(e.args[0]) / den
    if op == "sqrt":
        v = _ev(e.args[0])
        if v < 0:
            raise DomainError(f"negative radicand in {e}")
        return mpmath.sqrt(v)
    if op == "pow":
        k = e.args[1].value
        base = _ev(e.args[0])
        if k < 0 and base == 0:
            raise ZeroDivisionError(f"zero to a negative power in {e}")
        return base ** k
    raise ValueError(f"unknown node {op}")  # pragma: no cover


# -- integer polynomials -------------------------------------------------------

class IntPoly:
    """Integer polynomial, coefficients in ascending degree order.

    Normalised on construction: content removed, leading coefficient positive,
    trailing zero high-order coefficients dropped.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("zero polynomial")
        g = 0
        for c in cs:
            g = math.gcd(g, c)
        cs = [c // g for c in cs]
        if cs[-1] < 0:
            cs = [-c for c in cs]
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def reversed(self) -> "IntPoly":
        """Polynomial with reversed coefficients (roots inverted)."""
        return IntPoly(self.coeffs[::-1])

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            coef = str(a) if (a != 1 or k == 0) else ""
            parts.append(f"{sign} {coef}{mon}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def is_unit_poly(p: IntPoly) -> bool:
    """Monic with constant term +-1: roots are algebraic units."""
    return p.leading == 1 and abs(p.constant) == 1


# -- LLL -----------------------------------------------------------------------

def lll_reduce(basis: Sequence[Sequence[int]]) -> list[list[int]]:
    """LLL-reduce (delta = 3/4) linearly independent integer row vectors.

    All-integer variant: Gram-Schmidt data is kept as the integers
    ``d_i`` (Gram determinants) and ``lambda_{k,j} = d_{j} mu_{k,j}`` so no
    rational arithmetic is needed.
    """
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    d = [0] * (n + 1)          # d[0] = 1, d[i] for i = 1..n
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise ValueError("zero vector in basis")
    k, kmax = 1, 0             # 0-based index of the current vector

    def red(k, l):
        # size-reduce b_k against b_l
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise ValueError("basis vectors are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b


# -- minimal polynomials ---------------------------------------------------------

XSource = Union[mpf, Callable[[int], mpf]]


def _value_at(x: XSource, prec: int) -> mpf:
    if callable(x):
        with mp.workprec(prec + 32):
            return x(prec)
    return x


def _residual_ok(p: IntPoly, x: mpf, bits: int) -> bool:
    with mp.workprec(bits + 64):
        ax = abs(x)
        scale = sum(abs(c) * (k + 1) * ax ** k for k, c in enumerate(p.coeffs))
        val = p(x)
        return abs(val) <= scale * eps(bits)


def min_poly(x: XSource, max_deg: int = 8, prec: int = 512) -> IntPoly:
    """Lowest-degree integer polynomial vanishing at ``x``.

    ``x`` is either an mpf or a callable ``prec -> mpf``.  For each degree
    ``k = 1 .. max_deg`` the lattice spanned by ``[e_i | round(2^P' x^i)]``
    with ``P' = prec - 16 k`` is LLL-reduced; the short vectors are candidate
    polynomials.  Candidates whose height is comparable to the lattice
    determinant are discarded.  A candidate is accepted when its value at ``x`` is below
    ``2**-(prec - 16 - 4k)`` (relative to the coefficient scale) and, when ``x``
    is callable, also below ``2**-(3 prec / 2)`` at doubled precision.
    """
    if max_deg < 1:
        raise DomainError("max_deg must be at least 1")
    xv = _value_at(x, prec)
    x2 = _value_at(x, 2 * prec) if callable(x) else None
    for deg in range(1, max_deg + 1):
        scale_bits = prec - 16 * deg
        if scale_bits < 16:
            break
        with mp.workprec(prec + 32):
            powers = [xv ** i for i in range(deg + 1)]
            col = [int(mpmath.nint(mpmath.ldexp(pw, scale_bits))) for pw in powers]
        basis = [[1 if j == i else 0 for j in range(deg + 1)] + [col[i]] for i in range(deg + 1)]
        try:
            reduced = lll_reduce(basis)
        except ValueError:
            continue
        for row in reduced:
            cs = row[:-1]
            if cs[-1] == 0 or not any(cs):
                continue
            p = IntPoly(cs)
            if (deg + 1) * max(abs(c) for c in p.coeffs).bit_length() > scale_bits - 32:
                continue  # as tall as a generic relation: not evidence of algebraicity
            if not _residual_ok(p, xv, prec - 16 - 4 * deg):
                continue
            if x2 is not None and not _residual_ok(p, x2, (3 * prec) // 2):
                continue
            return p
    raise NotFoundError(f"no integer polynomial of degree <= {max_deg} found at {prec} bits")
