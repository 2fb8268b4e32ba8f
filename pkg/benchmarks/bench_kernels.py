"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

JIT compilation is excluded: each numba kernel is called once before timing.
"""
import argparse
import time

import numpy as np

from thetaunits import _kernels
from thetaunits.quadfields import is_fundamental

NEG = np.array([d for d in range(-20000, 0) if is_fundamental(d)], dtype=np.int64)
CASES = [
    ("class_numbers, 6000 discs", lambda k: k.class_numbers(NEG)),
    ("reduced_forms d=-2**22+4", lambda k: k.reduced_forms(-(2**22) + 4)),
    ("char_sum d=-10**6+4", lambda k: k.char_sum(-(10**6) + 4)),
    ("log_sin_sum d=10**6+1", lambda k: k.log_sin_sum(10**6 + 1)),
    ("kronecker d=-1288, 1e6 n", lambda k: k.kronecker(-1288, np.arange(1, 10**6 + 1, dtype=np.int64))),
]


def best(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    nb, npy = _kernels.numba_impl, _kernels.numpy_impl
    if nb is None:
        print("numba not importable; nothing to compare")
        return
    print(f"{'kernel':32s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for name, fn in CASES:
        fn(nb)  # compile / load from cache
        a, b = fn(npy), fn(nb)
        same = np.array_equal(a, b) if isinstance(a, np.ndarray) else abs(a - b) <= 1e-9 * max(1.0, abs(a))
        t_np, t_nb = best(lambda: fn(npy), args.repeat), best(lambda: fn(nb), args.repeat)
        print(f"{name:32s} {t_np * 1e3:12.2f} {t_nb * 1e3:12.2f} {t_np / t_nb:7.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
