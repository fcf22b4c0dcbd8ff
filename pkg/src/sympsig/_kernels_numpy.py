"""Pure-numpy kernels.

Every function here has a twin of the same name and signature in
``_kernels_numba``.  The two are kept algorithmically independent where that
is cheap (coset canonicalization brute-forces the subspace here and uses an
XOR basis in the compiled version) so that each can serve as an oracle for
the other.
"""
from __future__ import annotations

import numpy as np

WORD = 64


def gf2_matmul(a: np.ndarray, b: np.ndarray, inner: int) -> np.ndarray:
    """Product of bit-packed matrices; ``a`` has ``inner`` live columns."""
    m = a.shape[0]
    if m == 0 or inner == 0:
        return np.zeros((m, b.shape[1]), dtype=np.uint64)
    idx = np.arange(inner)
    abits = (a[:, idx // WORD] >> (idx % WORD).astype(np.uint64)) & np.uint64(1)
    picked = b[None, :inner, :] * abits[:, :, None]
    return np.bitwise_xor.reduce(picked, axis=1)


def gf2_rank(rows: np.ndarray, ncols: int) -> int:
    work = rows.copy()
    m = work.shape[0]
    rank = 0
    for col in range(ncols):
        if rank == m:
            break
        w, bit = divmod(col, WORD)
        mask = np.uint64(1) << np.uint64(bit)
        hits = np.nonzero(work[rank:, w] & mask)[0]
        if hits.size == 0:
            continue
        p = rank + hits[0]
        if p != rank:
            work[[rank, p]] = work[[p, rank]]
        below = rank + 1 + np.nonzero(work[rank + 1 :, w] & mask)[0]
        work[below] ^= work[rank]
        rank += 1
    return rank


def matmul_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    return np.matmul(a, b) % modulus


def encode_keys(mats: np.ndarray, bits: int) -> np.ndarray:
    n = mats.shape[0]
    flat = mats.reshape(n, -1).astype(np.int64)
    cells = flat.shape[1]
    shifts = np.int64(bits) * np.arange(cells - 1, -1, -1, dtype=np.int64)
    return np.bitwise_or.reduce(flat << shifts[None, :], axis=1)


def coset_canon(mats: np.ndarray, ybasis: np.ndarray) -> np.ndarray:
    """Lexicographically least representative of ``X (I + 2 Y)`` over the span of ``ybasis``.

    Brute force over all ``2**k`` subspace elements; fine for ``k <= 14``.
    """
    n, d, _ = mats.shape
    k = ybasis.shape[0]
    low = mats & 1
    high = (mats >> 1) & 1
    if k == 0:
        return low + 2 * high
    # every element of span(ybasis), shape (2**k, d, d)
    combos = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.int64)
    span = (np.tensordot(combos, ybasis, axes=(1, 0)) & 1).astype(np.int64)
    # shifts L @ Y for each element and subspace vector: (n, 2**k, d, d)
    moves = np.matmul(low[:, None, :, :], span[None, :, :, :]) & 1
    candidates = high[:, None, :, :] ^ moves
    cells = d * d
    weights = np.int64(1) << np.arange(cells - 1, -1, -1, dtype=np.int64)
    packed = (candidates.reshape(n, -1, cells) * weights).sum(axis=2)
    best = np.argmin(packed, axis=1)
    chosen = candidates[np.arange(n), best]
    return low + 2 * chosen
