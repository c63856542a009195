"""Hot inner loops, each with a numba and a pure-numpy implementation.

The backend is chosen once at import: numba when it imports cleanly and the
environment variable ``QTCENSUS_NUMBA`` is not ``0``.  Both backends are always
importable by name (``*_numpy`` / ``*_numba``) so tests and benchmarks can pit
them against each other.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("QTCENSUS_NUMBA", "1").lower() not in ("0", "false", "no", "off")


# ---------------------------------------------------------------- numpy path

def clear_multiples_numpy(mask, lo, steps, firsts):
    """Set ``mask[v - lo] = False`` for every ``v >= firsts[i]`` with ``steps[i] | v``."""
    size = mask.shape[0]
    lo = int(lo)
    for s, f in zip(steps.tolist(), firsts.tolist()):
        off = f - lo if f >= lo else (-lo) % s
        if off < size:
            mask[off::s] = False
    return mask


def strip_square_factors_numpy(values, primes):
    """Trial-divide each value until a square factor shows or the cofactor is small.

    Returns ``(smallest, cofactor)``: ``smallest[i]`` is the least prime whose
    square divides ``values[i]`` among the primes tried (0 if none), and
    ``cofactor[i]`` is what is left once every tried prime is divided out.
    The cofactor has no prime factor below the cube root of what remains, so it
    is 1, a prime, a prime square or a product of two primes.
    """
    smallest = np.zeros(values.shape[0], dtype=np.int64)
    cofactor = np.empty(values.shape[0], dtype=np.int64)
    for i, v in enumerate(values.tolist()):
        # primes up to the cube root of the original value are enough
        m = int(np.searchsorted(primes, round(v ** (1.0 / 3.0)) + 2, side="right"))
        cand = primes[:m]
        divisors = cand[(v % cand) == 0].tolist() if m else []
        for p in divisors:
            v //= p
            if v % p == 0:
                smallest[i] = p
                break
        cofactor[i] = v
    return smallest, cofactor


def pack_rows_numpy(rows):
    """uint64 key per row of a boolean (Y, N) array, bit ``a`` = column ``a``; N <= 64."""
    n_cols = rows.shape[1]
    packed = np.packbits(rows, axis=1, bitorder="little")
    padded = np.zeros((rows.shape[0], 8), dtype=np.uint8)
    padded[:, : packed.shape[1]] = packed
    keys = padded.view("<u8").reshape(-1).copy()
    if n_cols < 64:
        keys &= np.uint64((1 << n_cols) - 1)
    return keys


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def clear_multiples_numba(mask, lo, steps, firsts):
        size = mask.shape[0]
        for i in range(steps.shape[0]):
            s = steps[i]
            f = firsts[i]
            if f >= lo:
                off = f - lo
            else:
                off = (s - lo % s) % s
            j = off
            while j < size:
                mask[j] = False
                j += s
        return mask

    @njit(cache=True, nogil=True)
    def strip_square_factors_numba(values, primes):
        n = values.shape[0]
        smallest = np.zeros(n, dtype=np.int64)
        cofactor = np.empty(n, dtype=np.int64)
        for i in range(n):
            v = values[i]
            for j in range(primes.shape[0]):
                p = primes[j]
                if p * p > v // p:
                    break
                if v % p == 0:
                    v //= p
                    if v % p == 0:
                        smallest[i] = p
                        break
            cofactor[i] = v
        return smallest, cofactor

    @njit(cache=True, nogil=True)
    def pack_rows_numba(rows):
        n_rows, n_cols = rows.shape
        keys = np.zeros(n_rows, dtype=np.uint64)
        for r in range(n_rows):
            k = np.uint64(0)
            for c in range(n_cols):
                if rows[r, c]:
                    k |= np.uint64(1) << np.uint64(c)
            keys[r] = k
        return keys

else:  # pragma: no cover
    clear_multiples_numba = clear_multiples_numpy
    strip_square_factors_numba = strip_square_factors_numpy
    pack_rows_numba = pack_rows_numpy


if USE_NUMBA:
    clear_multiples = clear_multiples_numba
    strip_square_factors = strip_square_factors_numba
    pack_rows = pack_rows_numba
else:
    clear_multiples = clear_multiples_numpy
    strip_square_factors = strip_square_factors_numpy
    pack_rows = pack_rows_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
