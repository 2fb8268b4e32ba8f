"""numba ``@njit`` kernels; imported by ``_kernels`` only when numba is present.

Module-level definitions keep numba's on-disk cache valid across processes.
"""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def kronecker_scalar(D, n):
    res = 1
    if D % 2 == 0:
        two = 0
    else:
        r = D % 8
        two = 1 if (r == 1 or r == 7) else -1
    while n % 2 == 0:
        res *= two
        n //= 2
        if res == 0:
            return 0
    a = D % n
    b = n
    while b > 1:
        if a == 0:
            return 0
        while a % 2 == 0:
            r = b % 8
            if r == 3 or r == 5:
                res = -res
            a //= 2
        if a % 4 == 3 and b % 4 == 3:
            res = -res
        a, b = b % a, a
    return res

@njit(cache=True)
def kronecker(D, n):
    out = np.empty(n.shape[0], dtype=np.int64)
    for i in range(n.shape[0]):
        out[i] = kronecker_scalar(D, n[i])
    return out

@njit(cache=True)
def gcd(x, y):
    while y:
        x, y = y, x % y
    return abs(x)

@njit(cache=True)
def reduced_forms(d):
    amax = int(math.sqrt(-d / 3.0)) + 2
    cap = 16
    buf = np.empty((cap, 3), dtype=np.int64)
    k = 0
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            if k == cap:
                cap *= 2
                nb = np.empty((cap, 3), dtype=np.int64)
                nb[:k] = buf[:k]
                buf = nb
            buf[k, 0] = a
            buf[k, 1] = b
            buf[k, 2] = c
            k += 1
    return buf[:k].copy()

@njit(cache=True)
def char_sum(d):
    N = -d if d < 0 else d
    s = 0
    for a in range(1, N):
        s += a * kronecker_scalar(d, a)
    return s

@njit(cache=True)
def log_sin_sum(d):
    s = 0.0
    for a in range(1, d):
        chi = kronecker_scalar(d, a)
        if chi != 0:
            s += chi * math.log(math.sin(math.pi * a / d))
    return s

@njit(cache=True)
def class_numbers(discs):
    out = np.empty(discs.shape[0], dtype=np.int64)
    for i in range(discs.shape[0]):
        out[i] = reduced_forms(discs[i]).shape[0]
    return out
