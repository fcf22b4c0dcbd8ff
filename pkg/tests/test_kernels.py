import os
import subprocess
import sys

import numpy as np
import pytest

from sympsig import _kernels_numpy as ref
from sympsig import kernels
from sympsig.groups import y_basis_arrays

numba_impl = pytest.importorskip("sympsig._kernels_numba")


def _random_bits(rng, rows, words):
    return rng.integers(0, 2**63, size=(rows, words), dtype=np.int64).astype(np.uint64) * np.uint64(2) + rng.integers(
        0, 2, size=(rows, words)
    ).astype(np.uint64)


def test_gf2_matmul_agree(rng):
    for n, m, p in [(3, 5, 7), (64, 64, 64), (70, 130, 65)]:
        words_m = (m + 63) // 64
        words_p = (p + 63) // 64
        a = _random_bits(rng, n, words_m)
        b = _random_bits(rng, m, words_p)
        a[:, -1] &= np.uint64((1 << (m - 64 * (words_m - 1))) - 1) if m % 64 else np.uint64(2**64 - 1)
        b[:, -1] &= np.uint64((1 << (p - 64 * (words_p - 1))) - 1) if p % 64 else np.uint64(2**64 - 1)
        np.testing.assert_array_equal(ref.gf2_matmul(a, b, m), numba_impl.gf2_matmul(a, b, m))


def test_gf2_rank_agree(rng):
    for n, m in [(5, 5), (40, 70), (100, 100)]:
        rows = (rng.random((n, m)) < 0.3).astype(np.uint8)
        packed = np.zeros((n, (m + 63) // 64), dtype=np.uint64)
        for j in range(m):
            packed[:, j // 64] |= rows[:, j].astype(np.uint64) << np.uint64(j % 64)
        assert ref.gf2_rank(packed.copy(), m) == numba_impl.gf2_rank(packed.copy(), m)


def test_matmul_mod_agree(rng):
    a = rng.integers(0, 4, size=(50, 6, 6)).astype(np.int64)
    b = rng.integers(0, 4, size=(50, 6, 6)).astype(np.int64)
    want = np.einsum("tij,tjk->tik", a, b) % 4
    np.testing.assert_array_equal(ref.matmul_mod(a, b, 4), want)
    np.testing.assert_array_equal(numba_impl.matmul_mod(a, b, 4), want)


def test_matmul_mod_broadcasts(rng):
    a = rng.integers(0, 4, size=(3, 4, 4))
    b = rng.integers(0, 4, size=(4, 4))
    got = kernels.matmul_mod(a, b, 4)
    assert got.shape == (3, 4, 4)
    np.testing.assert_array_equal(got[1], (a[1] @ b) % 4)


def test_encode_keys_agree_and_are_injective(rng):
    mats = rng.integers(0, 4, size=(500, 4, 4)).astype(np.uint8)
    k1 = ref.encode_keys(mats, 2)
    k2 = numba_impl.encode_keys(mats, 2)
    np.testing.assert_array_equal(k1, k2)
    distinct = len({m.tobytes() for m in mats})
    assert len(set(k1.tolist())) == distinct


def test_encode_keys_overflow_guard():
    with pytest.raises(ValueError):
        kernels.encode_keys(np.zeros((1, 6, 6), dtype=np.uint8), 2)


@pytest.mark.parametrize("g", [1, 2])
def test_coset_canon_agree(g, rng):
    from sympsig.sampling import random_symplectic
    from sympsig.symplectic import reduce_mod

    mats = np.stack([reduce_mod(random_symplectic(g, rng, 6), 4).entries for _ in range(40)]).astype(np.int64)
    Y = y_basis_arrays(g)
    np.testing.assert_array_equal(ref.coset_canon(mats, Y), numba_impl.coset_canon(mats, Y))


def test_backend_flag_in_subprocess():
    code = "from sympsig import kernels; print(kernels.backend())"
    env = dict(os.environ, SYMPSIG_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["SYMPSIG_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
