"""Coefficient-table kernels for truncated multi-dual arithmetic.

A scalar of order k is a coefficient vector of length 2**k indexed by
subsets of the k nilpotent slots (slot i is bit i-1).  The product kernel
computes

    c[S] = sum over A subset of S of a[A] * b[S \\ A]

which is the multiplication of R[e1..ek] / (ei^2 = 0).

Summands are sorted before accumulation so the result is invariant, bit
for bit, under any permutation of the slots.  That makes the canonical
flip an exact symmetry of the arithmetic instead of a symmetry up to
rounding.

Two implementations are provided: a numba-compiled kernel and a pure
numpy/Python fallback.  Selection is done once at import time from the
environment variable TANGENTKIT_BACKEND ("numba" or "numpy"); the default
is numba when it is importable.  Both paths produce identical bits.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "TANGENTKIT_BACKEND"


def _mul_python(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    size = a.shape[0]
    out = np.empty(size)
    buf = np.empty(size)
    for s in range(size):
        n = 0
        sub = s
        while True:
            buf[n] = a[sub] * b[s ^ sub]
            n += 1
            if sub == 0:
                break
            sub = (sub - 1) & s
        terms = np.sort(buf[:n])
        acc = 0.0
        for i in range(n):
            acc += terms[i]
        out[s] = acc
    return out


def _make_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def _mul_numba(a, b):  # pragma: no cover - exercised via backend tests
        size = a.shape[0]
        out = np.empty(size)
        buf = np.empty(size)
        for s in range(size):
            n = 0
            sub = s
            while True:
                buf[n] = a[sub] * b[s ^ sub]
                n += 1
                if sub == 0:
                    break
                sub = (sub - 1) & s
            # insertion sort: same ascending order as np.sort on the fallback
            for i in range(1, n):
                key = buf[i]
                j = i - 1
                while j >= 0 and buf[j] > key:
                    buf[j + 1] = buf[j]
                    j -= 1
                buf[j + 1] = key
            acc = 0.0
            for i in range(n):
                acc += buf[i]
            out[s] = acc
        return out

    return _mul_numba


def _select_backend() -> tuple[str, object]:
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}")
    if choice in ("", "numba"):
        try:
            return "numba", _make_numba_kernel()
        except ImportError:
            if choice == "numba":
                raise
    return "numpy", _mul_python


BACKEND, mul_coeffs = _select_backend()
