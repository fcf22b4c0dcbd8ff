"""Time the numba kernels against the pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py            # per-kernel timings
    python3 benchmarks/bench_kernels.py --end-to-end

``--end-to-end`` also enumerates H at g=2 in fresh interpreters, once per
backend (selected through SYMPSIG_DISABLE_NUMBA).
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from sympsig import _kernels_numba as nb
from sympsig import _kernels_numpy as npk
from sympsig.groups import y_basis_arrays


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng: np.random.Generator) -> dict:
    a = rng.integers(0, 4, size=(20000, 4, 4)).astype(np.int64)
    b = rng.integers(0, 4, size=(20000, 4, 4)).astype(np.int64)
    bits = rng.integers(0, 2**63, size=(256, 4), dtype=np.int64).astype(np.uint64)
    cos = rng.integers(0, 4, size=(4000, 4, 4)).astype(np.int64)
    Y = y_basis_arrays(2)
    return {
        "matmul_mod 20000x4x4": lambda k: k.matmul_mod(a, b, 4),
        "encode_keys 20000x4x4": lambda k: k.encode_keys(a, 2),
        "gf2_matmul 256x256": lambda k: k.gf2_matmul(bits, bits, 256),
        "gf2_rank 256x256": lambda k: k.gf2_rank(bits, 256),
        "coset_canon 4000 (g=2)": lambda k: k.coset_canon(cos, Y),
    }


def end_to_end() -> None:
    code = "import time; t=time.perf_counter(); from sympsig.groups import enumerate_H; enumerate_H(2); print(time.perf_counter()-t)"
    for flag in ("0", "1"):
        env = dict(os.environ, SYMPSIG_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        label = "numpy" if flag == "1" else "numba"
        print(f"{'enumerate_H(2) incl. import/JIT':32s} {label:6s} {float(out.stdout):8.3f} s")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    table = cases(rng)
    for fn in table.values():
        fn(nb)  # compile outside the timed region

    print(f"{'kernel':32s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, fn in table.items():
        t_np = best_of(lambda: fn(npk), args.repeat)
        t_nb = best_of(lambda: fn(nb), args.repeat)
        print(f"{name:32s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")
    if args.end_to_end:
        end_to_end()


if __name__ == "__main__":
    main()
