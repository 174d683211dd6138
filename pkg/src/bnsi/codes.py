"""Linear error-correcting codes given by parity-check matrices, and MDS
codes built from Vandermonde parity checks (generalized Reed-Solomon)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DependentRows, FieldTooSmall, TooLarge
from .gf import FieldSpec, FqMatrix, codes_to_vectors, mat_rank, matmul_arrays, null_space

DISTANCE_GUARD = 2**24
_CHUNK = 2**16


@dataclass(frozen=True, eq=False)
class LinearCodeSpec:
    """Code {x : H x^T = 0} of length n = cols(H) and dimension n - rows(H).

    ``d_min`` is a claimed minimum distance, or None when unknown.
    """

    H: FqMatrix
    d_min: int | float | None = None

    def __post_init__(self):
        if mat_rank(self.H) != self.H.rows:
            raise DependentRows("parity-check rows must be linearly independent")

    @property
    def n(self) -> int:
        return self.H.cols

    @property
    def k(self) -> int:
        return self.H.cols - self.H.rows

    @property
    def field(self) -> FieldSpec:
        return self.H.field


def min_distance(c: LinearCodeSpec) -> int | float:
    """Least weight of a nonzero codeword, by enumerating all q^k messages.

    A zero-dimensional code has no nonzero codeword; math.inf is returned.
    """
    f, k = c.field, c.k
    if k == 0:
        return math.inf
    if f.q**k > DISTANCE_GUARD:
        raise TooLarge(f"q^k = {f.q}^{k} codewords exceed the guard 2^24")
    G = null_space(c.H).array
    best = c.n
    total = f.q**k
    for start in range(1, total, _CHUNK):
        msgs = codes_to_vectors(np.arange(start, min(total, start + _CHUNK)), f.q, k)
        words = matmul_arrays(msgs, G, f)
        best = min(best, int((words != 0).sum(axis=1).min()))
    return best


def mds_realizable(q: int, n: int, k: int) -> bool:
    """Whether an [n, k, n-k+1] code is produced here over GF(q).

    Trivial dimensions, repetition and single-parity codes exist over every
    field; otherwise a (possibly doubly extended) Reed-Solomon code needs
    n <= q + 1.
    """
    return k in (0, 1, n - 1, n) or n <= q + 1


def grs_parity_check(f: FieldSpec, n: int, d: int) -> LinearCodeSpec:
    """Parity check of an MDS code of length n and minimum distance d.

    Row r of H holds alpha^r for the evaluation points alpha = 0, 1, ...,
    n-1 (integer codes of field elements, with 0^0 = 1). When n = q + 1 the
    last column is (0, ..., 0, 1), the point at infinity of a doubly
    extended code. d = 1 gives the whole space (H with no rows).
    """
    if d == n + 1:
        raise ValueError("d = n + 1 would give a zero-dimensional code")
    if not 1 <= d <= n:
        raise ValueError(f"distance must satisfy 1 <= d <= n, got d = {d}, n = {n}")
    if n > f.q + 1:
        raise FieldTooSmall(f"no Reed-Solomon code of length {n} over {f}")
    rows = d - 1
    H = np.zeros((rows, n), dtype=np.int64)
    points = min(n, f.q)
    for j in range(points):
        v = 1
        for r in range(rows):
            H[r, j] = v
            v = f.mul(v, j)
    if n == f.q + 1 and rows:
        H[rows - 1, n - 1] = 1
    return LinearCodeSpec(FqMatrix(H, f), d_min=d)


def mds_parity_check(f: FieldSpec, n: int, k: int) -> LinearCodeSpec:
    """Parity check of an [n, k, n-k+1] code for any realizable (n, k)."""
    if not mds_realizable(f.q, n, k):
        raise FieldTooSmall(f"no [{n},{k}] MDS code constructed over {f}")
    if k == 0:
        return LinearCodeSpec(FqMatrix.identity(n, f), d_min=math.inf)
    if k == n:
        return LinearCodeSpec(FqMatrix.zeros(0, n, f), d_min=1)
    if n <= f.q + 1:
        return grs_parity_check(f, n, n - k + 1)
    if k == n - 1:
        return LinearCodeSpec(FqMatrix(np.ones((1, n), dtype=np.int64), f), d_min=2)
    # repetition code: H = [I_{n-1} | -1], codewords a(1, ..., 1)
    H = np.zeros((n - 1, n), dtype=np.int64)
    H[:, : n - 1] = np.eye(n - 1, dtype=np.int64)
    H[:, n - 1] = f.neg(1)
    return LinearCodeSpec(FqMatrix(H, f), d_min=n)
