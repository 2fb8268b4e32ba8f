"""Integer/float64 inner loops of the quadratic-field code.

Two implementations of every kernel live here: a numba ``@njit`` version and
a pure-numpy version.  The public names at the bottom are bound to one of them
at import time.  Set ``THETAUNITS_NUMBA=0`` to force the numpy path (numba is
also skipped silently when it cannot be imported).  Both paths are importable
explicitly as ``numba_impl`` / ``numpy_impl`` for benchmarking and for the
cross-backend tests.

Kernels operate on machine integers; discriminants are limited to
``|d| < 2**31`` which keeps every intermediate product inside int64.
"""
from __future__ import annotations

import math
import os
from types import SimpleNamespace

import numpy as np

MAX_ABS_DISC = 2**31


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------

def _kronecker_np(D: int, n: np.ndarray) -> np.ndarray:
    """Vectorised Kronecker symbol (D | n) for an array of positive n."""
    n = np.asarray(n, dtype=np.int64).copy()
    out = np.ones(n.shape, dtype=np.int64)
    # factor 2 out of n
    d_mod8 = D % 8
    two_val = 0 if D % 2 == 0 else (1 if d_mod8 in (1, 7) else -1)
    even = (n % 2 == 0)
    while even.any():
        out[even] *= two_val
        n[even] //= 2
        even = (n % 2 == 0) & (n > 0)
    # Jacobi symbol (D mod n | n) for odd n, vectorised Euclid
    a = np.mod(D, n)
    b = n.copy()
    active = b > 1
    while active.any():
        # strip factors of two from a
        tw = active & (a % 2 == 0) & (a != 0)
        while tw.any():
            bm8 = b[tw] % 8
            flip = (bm8 == 3) | (bm8 == 5)
            sub = out[tw]
            sub[flip] *= -1
            out[tw] = sub
            a[tw] //= 2
            tw = active & (a % 2 == 0) & (a != 0)
        zero = active & (a == 0)
        out[zero] = 0
        active &= ~zero
        # reciprocity and reduction
        swap = active.copy()
        flip = swap & (a % 4 == 3) & (b % 4 == 3)
        out[flip] *= -1
        a_new = np.where(swap, np.mod(b, np.where(a == 0, 1, a)), a)
        b_new = np.where(swap, a, b)
        a, b = a_new, b_new
        active &= b > 1
    return out


def _reduced_forms_np(d: int) -> np.ndarray:
    amax = math.isqrt(-d // 3) + 1
    a = np.arange(1, amax + 1, dtype=np.int64)[:, None]
    b = np.arange(-amax, amax + 1, dtype=np.int64)[None, :]
    A, B = np.broadcast_arrays(a, b)
    num = B * B - d
    ok = (np.abs(B) <= A) & (B != -A) & (num % (4 * A) == 0)
    C = np.where(ok, num // (4 * A), 0)
    ok &= C >= A
    ok &= ~((A == C) & (B < 0))
    g = np.gcd(np.gcd(A, np.abs(B)), C)
    ok &= g == 1
    forms = np.stack([A[ok], B[ok], C[ok]], axis=1)
    order = np.lexsort((forms[:, 2], forms[:, 1], forms[:, 0]))
    return forms[order]


def _char_sum_np(d: int) -> int:
    N = abs(d)
    a = np.arange(1, N, dtype=np.int64)
    chi = _kronecker_np(d, a)
    return int(np.sum(chi * a))


def _log_sin_sum_np(d: int) -> float:
    a = np.arange(1, d, dtype=np.int64)
    chi = _kronecker_np(d, a)
    return float(np.sum(chi * np.log(np.sin(np.pi * a / d))))


def _class_numbers_np(discs: np.ndarray) -> np.ndarray:
    return np.array([_reduced_forms_np(int(x)).shape[0] for x in discs], dtype=np.int64)


numpy_impl = SimpleNamespace(
    name="numpy",
    kronecker=_kronecker_np,
    reduced_forms=_reduced_forms_np,
    char_sum=_char_sum_np,
    log_sin_sum=_log_sin_sum_np,
    class_numbers=_class_numbers_np,
)


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

def _build_numba():
    from . import _kernels_nb as nb

    def _reduced_forms_sorted(d):
        forms = nb.reduced_forms(np.int64(d))
        order = np.lexsort((forms[:, 2], forms[:, 1], forms[:, 0]))
        return forms[order]

    return SimpleNamespace(
        name="numba",
        kronecker=lambda D, n: nb.kronecker(np.int64(D), np.asarray(n, dtype=np.int64)),
        reduced_forms=_reduced_forms_sorted,
        char_sum=lambda d: int(nb.char_sum(np.int64(d))),
        log_sin_sum=lambda d: float(nb.log_sin_sum(np.int64(d))),
        class_numbers=lambda discs: nb.class_numbers(np.asarray(discs, dtype=np.int64)),
    )


try:
    numba_impl = _build_numba()
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba_impl = None

_want_numba = os.environ.get("THETAUNITS_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")
backend = numba_impl if (_want_numba and numba_impl is not None) else numpy_impl

BACKEND = backend.name


def _check(d: int) -> int:
    d = int(d)
    if abs(d) >= MAX_ABS_DISC:
        raise OverflowError(f"discriminant {d} exceeds kernel range")
    return d


def kronecker_table(D: int, n) -> np.ndarray:
    return backend.kronecker(_check(D), n)


def reduced_forms(d: int) -> np.ndarray:
    """Primitive reduced forms of negative discriminant ``d`` as an (h, 3) array."""
    return backend.reduced_forms(_check(d))


def char_sum(d: int) -> int:
    """sum_{0<a<|d|} a * (d|a)."""
    return backend.char_sum(_check(d))


def log_sin_sum(d: int) -> float:
    """sum_{0<a<d} (d|a) * log(sin(pi a / d)) for d > 0."""
    return backend.log_sin_sum(_check(d))


def class_numbers(discs) -> np.ndarray:
    """Form-count class numbers for an array of negative discriminants."""
    return backend.class_numbers(np.asarray(discs, dtype=np.int64))
