"""Brute-force optimal codelength for small instances.

Validity of L depends only on K = {z : zL = 0}: L is valid exactly when K
avoids the interfering set I. K is the orthogonal complement of the column
space of L, so dim K = n - rank(L), and every subspace W avoiding I arises
as K for L = H^T with H a parity check of W. Hence
N_opt = n - max{dim W : W a subspace with W and I disjoint}.

``optimal_codelength_subspace`` searches subspaces directly;
``optimal_codelength_exhaustive`` searches matrices column by column and
shares nothing with it beyond the interfering set.
"""
from __future__ import annotations

from itertools import combinations_with_replacement, product

import numpy as np

from . import kernels
from .errors import TooLarge
from .gf import FqMatrix, codes_to_vectors, matmul_arrays, parity_check_of_rowspace
from .problem import BnsiProblem, interfering_codes, interfering_mask

SUBSPACE_GUARD = 2**24
EXHAUSTIVE_GUARD = 2**26


def subspace_count(q: int, n: int) -> int:
    """Number of subspaces of F_q^n, the sum of Gaussian binomials."""
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= q ** (n - i) - 1
            den *= q ** (i + 1) - 1
        total += num // den
    return total


def _largest_avoiding_subspace(p: BnsiProblem) -> np.ndarray:
    """RREF basis (rows) of the first largest subspace disjoint from I.

    Rows are added with strictly decreasing pivot columns. A new row is
    zero left of its pivot and on the pivots already chosen, so earlier
    rows stay reduced and every subspace has exactly one path here.
    """
    q, n = p.q, p.n
    allowed = (~interfering_mask(p)).astype(np.uint8)
    args = p.field.kernel_args()
    best: list = [[], 0]

    def dfs(span: np.ndarray, rows: list, pivots: list, below: int):
        dim = len(rows)
        if dim > best[1]:
            best[0], best[1] = list(rows), dim
        if dim + below <= best[1]:
            return
        for c in range(below - 1, -1, -1):
            if dim + c + 1 <= best[1]:
                return
            free = [j for j in range(c + 1, n) if j not in pivots]
            for vals in product(range(q), repeat=len(free)):
                v = np.zeros(n, dtype=np.int64)
                v[c] = 1
                v[free] = vals
                ext = kernels.span_extend(span, v, *args, allowed)
                if ext is None:
                    continue
                dfs(ext, rows + [v], pivots + [c], c)

    dfs(np.zeros(1, dtype=np.int64), [], [], n)
    rows = sorted(best[0], key=lambda r: int(np.flatnonzero(r)[0]))
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def optimal_codelength_subspace(p: BnsiProblem) -> tuple[int, FqMatrix]:
    """Exact N_opt and an encoder attaining it."""
    count = subspace_count(p.q, p.n)
    if count > SUBSPACE_GUARD:
        raise TooLarge(f"{count} subspaces of GF({p.q})^{p.n} exceed the guard 2^24")
    W = _largest_avoiding_subspace(p)
    H = parity_check_of_rowspace(FqMatrix(W, p.field, shape=W.shape))
    L = H.T
    return L.cols, L


def optimal_codelength_exhaustive(p: BnsiProblem, N_max: int) -> int | None:
    """Least N <= N_max with a valid n x N matrix, by trying matrices.

    Columns are tried as nondecreasing sequences of vector codes, since
    permuting columns keeps validity. A bitset tracks the z in I still
    mapped to zero; the matrix is valid once it is empty.
    """
    q, n = p.q, p.n
    for N in range(N_max + 1):
        if q ** (n * N) > EXHAUSTIVE_GUARD:
            raise TooLarge(f"q^(nN) = {q}^{n * N} exceeds the guard 2^26")
    Z = codes_to_vectors(interfering_codes(p), q, n)
    full = (1 << Z.shape[0]) - 1
    if full == 0:
        return 0
    cols = codes_to_vectors(np.arange(1, q**n, dtype=np.int64), q, n)
    zero_hits = matmul_arrays(Z, cols.T, p.field) == 0  # [z, column]
    survivors = []
    for c in range(cols.shape[0]):
        bits = 0
        for k in np.flatnonzero(zero_hits[:, c]).tolist():
            bits |= 1 << k
        survivors.append(bits)
    for N in range(1, N_max + 1):
        for combo in combinations_with_replacement(range(len(survivors)), N):
            alive = full
            for c in combo:
                alive &= survivors[c]
                if not alive:
                    break
            if not alive:
                return N
    return None
