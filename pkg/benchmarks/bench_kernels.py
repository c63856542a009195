"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the QTCENSUS_NUMBA flag does not
matter here.  The first numba call compiles and is excluded from timing.
"""
import argparse
import timeit

import numpy as np

from qtcensus import _kernels
from qtcensus.numtheory import primes_up_to


def cases():
    size = 1 << 22
    lo = 2**40
    base = primes_up_to(int((lo + size) ** 0.5) + 1)
    yield "prime window 2^22 @ 2^40", lambda impl: impl(np.ones(size, dtype=bool), np.int64(lo), base, base * base), "clear_multiples"
    sq = base * base
    zeros = np.zeros_like(sq)
    yield "squarefree window 2^22 @ 2^40", lambda impl: impl(np.ones(size, dtype=bool), np.int64(lo), sq, zeros), "clear_multiples"
    small = primes_up_to(1 << 20)
    low = small[:1000]
    yield "prime window 2^22 @ 0", lambda impl: impl(np.ones(size, dtype=bool), np.int64(0), low, low * low), "clear_multiples"
    rng = np.random.default_rng(0)
    vals = rng.integers(1, 2**45, 2000, dtype=np.int64)
    trial = primes_up_to(int(2**15) + 2)
    yield "squarefree trial division, 2000 values < 2^45", lambda impl: impl(vals, trial), "strip_square_factors"
    rows = rng.random((1 << 18, 16)) < 0.5
    yield "pack 2^18 profile rows of width 16", lambda impl: impl(rows), "pack_rows"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':48s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for label, call, name in cases():
        np_impl = getattr(_kernels, name + "_numpy")
        nb_impl = getattr(_kernels, name + "_numba")
        call(nb_impl)  # compile
        t_np = min(timeit.repeat(lambda: call(np_impl), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: call(nb_impl), number=1, repeat=args.repeat))
        print(f"{label:48s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
