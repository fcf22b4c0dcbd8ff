"""numba-compiled kernels; same names and contracts as ``_kernels_numpy``."""
from __future__ import annotations

import numpy as np
from numba import njit

WORD = 64


@njit(cache=True)
def gf2_matmul(a, b, inner):
    m = a.shape[0]
    wb = b.shape[1]
    out = np.zeros((m, wb), dtype=np.uint64)
    for i in range(m):
        for k in range(inner):
            if (a[i, k // WORD] >> np.uint64(k % WORD)) & np.uint64(1):
                for w in range(wb):
                    out[i, w] ^= b[k, w]
    return out


@njit(cache=True)
def gf2_rank(rows, ncols):
    work = rows.copy()
    m = work.shape[0]
    nw = work.shape[1]
    rank = 0
    for col in range(ncols):
        if rank == m:
            break
        w = col // WORD
        mask = np.uint64(1) << np.uint64(col % WORD)
        p = -1
        for r in range(rank, m):
            if work[r, w] & mask:
                p = r
                break
        if p < 0:
            continue
        if p != rank:
            for j in range(nw):
                t = work[rank, j]
                work[rank, j] = work[p, j]
                work[p, j] = t
        for r in range(rank + 1, m):
            if work[r, w] & mask:
                for j in range(nw):
                    work[r, j] ^= work[rank, j]
        rank += 1
    return rank


@njit(cache=True)
def matmul_mod(a, b, modulus):
    n, d, e = a.shape
    f = b.shape[2]
    out = np.empty((n, d, f), dtype=np.int64)
    for t in range(n):
        for i in range(d):
            for j in range(f):
                s = 0
                for k in range(e):
                    s += a[t, i, k] * b[t, k, j]
                out[t, i, j] = s % modulus
    return out


@njit(cache=True)
def encode_keys(mats, bits):
    n, d, e = mats.shape
    out = np.empty(n, dtype=np.int64)
    for t in range(n):
        key = 0
        for i in range(d):
            for j in range(e):
                key = (key << bits) | mats[t, i, j]
        out[t] = key
    return out


@njit(cache=True)
def _pack_bits(m, d):
    v = 0
    for i in range(d):
        for j in range(d):
            v = (v << 1) | (m[i, j] & 1)
    return v


@njit(cache=True)
def coset_canon(mats, ybasis):
    """XOR-basis reduction of the high bit plane; the min of a coset ``h + S``
    is reached by clearing pivots from the top bit down."""
    n, d, _ = mats.shape
    k = ybasis.shape[0]
    cells = d * d
    out = np.empty((n, d, d), dtype=np.int64)
    low = np.empty((d, d), dtype=np.int64)
    high = np.empty((d, d), dtype=np.int64)
    prod = np.empty((d, d), dtype=np.int64)
    piv = np.zeros(cells, dtype=np.int64)
    for t in range(n):
        for i in range(d):
            for j in range(d):
                low[i, j] = mats[t, i, j] & 1
                high[i, j] = (mats[t, i, j] >> 1) & 1
        piv[:] = 0
        for y in range(k):
            for i in range(d):
                for j in range(d):
                    s = 0
                    for l in range(d):
                        s += low[i, l] * ybasis[y, l, j]
                    prod[i, j] = s & 1
            v = _pack_bits(prod, d)
            for b in range(cells - 1, -1, -1):
                if (v >> b) & 1:
                    if piv[b] == 0:
                        piv[b] = v
                        break
                    v ^= piv[b]
        h = _pack_bits(high, d)
        for b in range(cells - 1, -1, -1):
            if (h >> b) & 1 and piv[b] != 0:
                h ^= piv[b]
        for p in range(cells):
            i = p // d
            j = p % d
            bit = (h >> (cells - 1 - p)) & 1
            out[t, i, j] = low[i, j] + 2 * bit
    return out
