"""Kernel dispatch.

The compiled numba kernels are used by default.  Set ``SYMPSIG_DISABLE_NUMBA=1``
before import to run the pure-numpy path instead (or when numba is missing).
Both paths return identical results; ``benchmarks/bench_kernels.py`` times them.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_numpy

WORD = 64

_disabled = os.environ.get("SYMPSIG_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError("numba disabled by SYMPSIG_DISABLE_NUMBA")
    from . import _kernels_numba as _impl

    USING_NUMBA = True
except ImportError:
    _impl = _kernels_numpy
    USING_NUMBA = False

# numpy brute force materializes n * 2**k * d * d cells per call
_CANON_CHUNK_CELLS = 1 << 23


def backend() -> str:
    return "numba" if USING_NUMBA else "numpy"


def gf2_matmul(a: np.ndarray, b: np.ndarray, inner: int) -> np.ndarray:
    return _impl.gf2_matmul(
        np.ascontiguousarray(a, dtype=np.uint64), np.ascontiguousarray(b, dtype=np.uint64), int(inner)
    )


def gf2_rank(rows: np.ndarray, ncols: int) -> int:
    return int(_impl.gf2_rank(np.ascontiguousarray(rows, dtype=np.uint64), int(ncols)))


def matmul_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """Batched ``a[t] @ b[t] mod modulus``; either side may be a single matrix."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim == 2:
        a = a[None]
    if b.ndim == 2:
        b = b[None]
    n = max(a.shape[0], b.shape[0])
    a = np.ascontiguousarray(np.broadcast_to(a, (n,) + a.shape[1:]))
    b = np.ascontiguousarray(np.broadcast_to(b, (n,) + b.shape[1:]))
    return _impl.matmul_mod(a, b, int(modulus))


def encode_keys(mats: np.ndarray, bits: int) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if mats.shape[1] * mats.shape[2] * bits > 63:
        raise ValueError("matrix too large for a single-word key")
    return _impl.encode_keys(mats, int(bits))


def coset_canon(mats: np.ndarray, ybasis: np.ndarray) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    ybasis = np.ascontiguousarray(ybasis, dtype=np.int64)
    n, d, _ = mats.shape
    if d * d > 63:
        raise ValueError("coset canonicalization supports at most 7x7 matrices")
    if USING_NUMBA:
        return _impl.coset_canon(mats, ybasis)
    per = max(1, _CANON_CHUNK_CELLS // ((1 << ybasis.shape[0]) * d * d))
    parts = [_impl.coset_canon(mats[s : s + per], ybasis) for s in range(0, n, per)]
    return np.concatenate(parts) if parts else mats.copy()
