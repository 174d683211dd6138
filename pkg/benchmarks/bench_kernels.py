"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit

import numpy as np

from bnsi import _kernels_py
from bnsi.gf import FieldSpec

try:
    from bnsi import _kernels
except ImportError:
    _kernels = None


def workloads():
    rng = random.Random(0)
    f2, f16 = FieldSpec.of(2), FieldSpec.of(16)

    def mat(f, r, c):
        return np.array([[rng.randrange(f.q) for _ in range(c)] for _ in range(r)], dtype=np.int64)

    a16 = mat(f16, 40, 60)
    yield "rref 40x60 GF(16)", lambda k: k.rref(a16.copy(), *f16.kernel_args())
    b16 = mat(f16, 60, 30)
    yield "matmul 40x60 @ 60x30 GF(16)", lambda k: k.matmul(a16, b16, *f16.kernel_args())
    z = mat(f2, 4096, 12)
    L = mat(f2, 12, 6)
    yield "first_zero_product 4096x12 GF(2)", lambda k: k.first_zero_product(z, L, *f2.kernel_args())
    f3 = FieldSpec.of(3)
    allowed = np.ones(3**8, dtype=np.uint8)
    span = np.arange(9, dtype=np.int64)
    v = np.array([0, 0, 0, 0, 0, 1, 0, 0], dtype=np.int64)
    yield "span_extend GF(3)^8", lambda k: k.span_extend(span, v, *f3.kernel_args(), allowed)
    masks = np.array([rng.randrange(1, 2**14) for _ in range(6)], dtype=np.int64)
    yield "bmax_search n=14", lambda k: k.bmax_search(masks, 14, 2)
    values = np.array([0] + [rng.randrange(4) for _ in range(2**9 - 1)], dtype=np.int64)
    yield "best_partition s=9", lambda k: k.best_partition(values, 9)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':36} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for name, fn in workloads():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:36} {t_py:12.3f} {'n/a':>12} {'':>8}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:36} {t_py:12.3f} {t_cy:12.3f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
