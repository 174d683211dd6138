"""Per-user syndrome decoding.

User i receives c = xL and holds x^e_{X_i} = x_{X_i} + eps with wt(eps) <= delta_s.
With beta_i a set of rows spanning rowspan(L_{Y_i}) and H_i a parity check
of that span, the syndrome H_i (x^e L_{X_i} - c)^T = A_i eps^T with
A_i = H_i L_{X_i}^T no longer depends on x_{Y_i}. A table from syndromes
back to low-weight error patterns finishes the job.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateSyndrome,
    InvalidEncoder,
    SyndromeNotFound,
    TableTooLarge,
)
from .gf import FqMatrix, matmul_arrays, parity_check_of_rowspace, rref_array
from .problem import BnsiProblem
from .validity import as_encoder, is_valid_by_rank

TABLE_GUARD = 2**24


def encode(p: BnsiProblem, L, x) -> tuple[int, ...]:
    """Codeword c = xL."""
    L = as_encoder(p, L)
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if x.shape[0] != p.n:
        raise DimensionMismatch(f"message has length {x.shape[0]}, expected {p.n}")
    return tuple(int(v) for v in matmul_arrays(x[None, :], L.array, p.field)[0])


def encode_batch(p: BnsiProblem, L, xs: np.ndarray) -> np.ndarray:
    L = as_encoder(p, L)
    return matmul_arrays(np.asarray(xs, dtype=np.int64), L.array, p.field)


def error_pattern_count(length: int, delta_s: int, q: int) -> int:
    return sum(comb(length, w) * (q - 1) ** w for w in range(min(delta_s, length) + 1))


def error_patterns(length: int, delta_s: int, q: int):
    """Yield every eps with wt(eps) <= delta_s: weight ascending, then
    support in combinations order, then nonzero values ascending."""
    for w in range(min(delta_s, length) + 1):
        for support in combinations(range(length), w):
            for vals in product(range(1, q), repeat=w):
                eps = [0] * length
                for j, v in zip(support, vals):
                    eps[j] = v
                yield tuple(eps)


def greedy_basis_rows(a: np.ndarray, rows, field) -> list[int]:
    """Rows (0-based, ascending) picked greedily to span rowspan(a[rows])."""
    chosen, rank = [], 0
    for j in rows:
        trial = chosen + [j]
        r = len(rref_array(a[trial], field)[1]) if a.shape[1] else 0
        if r > rank:
            chosen, rank = trial, r
    return chosen


def _syndrome_keys(s: np.ndarray, q: int):
    """Integer keys for syndrome rows when they fit in int64, else None."""
    r = s.shape[1]
    if q**r >= 2**62:
        return None
    w = q ** np.arange(r - 1, -1, -1, dtype=np.int64)
    return s @ w


@dataclass(frozen=True, eq=False)
class ReceiverDecoder:
    problem: BnsiProblem
    user: int
    X: tuple[int, ...]
    beta: tuple[int, ...]
    H: FqMatrix
    A: FqMatrix
    L_X: FqMatrix
    patterns: np.ndarray | None
    _keys: np.ndarray | None
    _order: np.ndarray | None
    _dict: dict | None

    @property
    def uses_table(self) -> bool:
        return self.patterns is not None

    @property
    def table(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Syndrome -> error pattern, in error-pattern enumeration order."""
        if self.patterns is None:
            raise TableTooLarge("decoder was built without a table")
        synd = matmul_arrays(self.patterns, self.A.array.T, self.problem.field)
        return {tuple(map(int, s)): tuple(map(int, e)) for s, e in zip(synd, self.patterns)}

    def syndrome(self, c, side_info) -> tuple[int, ...]:
        f = self.problem.field
        c = np.asarray(c, dtype=np.int64).reshape(1, -1)
        xe = np.asarray(side_info, dtype=np.int64).reshape(1, -1)
        y = f.sub(matmul_arrays(xe, self.L_X.array, f), c)
        return tuple(int(v) for v in matmul_arrays(y, self.H.array.T, f)[0])

    def _lookup(self, synd: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Error patterns for a batch of syndromes plus a found mask."""
        f = self.problem.field
        B, width = synd.shape[0], len(self.X)
        out = np.zeros((B, width), dtype=np.int64)
        ok = np.zeros(B, dtype=bool)
        if self.patterns is None:
            for b in range(B):
                e = _search_pattern(self, synd[b])
                if e is not None:
                    out[b], ok[b] = e, True
            return out, ok
        if self._keys is not None:
            keys = _syndrome_keys(synd, f.q)
            pos = np.searchsorted(self._keys, keys)
            pos = np.minimum(pos, len(self._keys) - 1)
            ok = self._keys[pos] == keys
            out[ok] = self.patterns[self._order[pos[ok]]]
            return out, ok
        for b in range(B):
            e = self._dict.get(synd[b].tobytes())
            if e is not None:
                out[b], ok[b] = self.patterns[e], True
        return out, ok


def _search_pattern(d: ReceiverDecoder, synd: np.ndarray):
    f = d.problem.field
    At = d.A.array.T
    for eps in error_patterns(len(d.X), d.problem.delta_s, f.q):
        e = np.asarray(eps, dtype=np.int64)[None, :]
        if np.array_equal(matmul_arrays(e, At, f)[0], synd):
            return e[0]
    return None


def build_decoder(
    p: BnsiProblem,
    L,
    i: int,
    *,
    check: bool = False,
    table_guard: int = TABLE_GUARD,
    fallback: bool = False,
) -> ReceiverDecoder:
    """Decoder for user ``i`` (1-based).

    With more than ``table_guard`` error patterns the build fails with
    TableTooLarge, or, when ``fallback`` is set, returns a table-free
    decoder that searches the patterns on every call.
    """
    L = as_encoder(p, L)
    if not 1 <= i <= p.m:
        raise IndexError(f"user {i} out of range [1, {p.m}]")
    if check and not is_valid_by_rank(p, L):
        raise InvalidEncoder("encoder fails the validity check")
    f = p.field
    a = L.array
    x0, y0 = list(p.x0[i - 1]), list(p.y0[i - 1])
    beta0 = greedy_basis_rows(a, y0, f)
    H = parity_check_of_rowspace(FqMatrix(a[beta0].reshape(len(beta0), L.cols), f))
    L_X = FqMatrix(a[x0].reshape(len(x0), L.cols), f)
    A = H @ L_X.T

    count = error_pattern_count(len(x0), p.delta_s, f.q)
    patterns = keys = order = lookup = None
    if count > table_guard:
        if not fallback:
            raise TableTooLarge(f"{count} error patterns exceed the table guard {table_guard}")
    else:
        patterns = np.array(list(error_patterns(len(x0), p.delta_s, f.q)), dtype=np.int64)
        patterns = patterns.reshape(count, len(x0))
        synd = matmul_arrays(patterns, A.array.T, f)
        keys_all = _syndrome_keys(synd, f.q)
        if keys_all is not None:
            order = np.argsort(keys_all, kind="stable")
            keys = keys_all[order]
            dup = np.flatnonzero(keys[1:] == keys[:-1])
            if dup.size:
                e1, e2 = sorted((order[dup[0]], order[dup[0] + 1]))
                _raise_duplicate(patterns[e1], patterns[e2], synd[e1])
        else:
            lookup = {}
            for idx, row in enumerate(synd):
                key = row.tobytes()
                if key in lookup:
                    _raise_duplicate(patterns[lookup[key]], patterns[idx], row)
                lookup[key] = idx
        patterns.setflags(write=False)

    return ReceiverDecoder(
        p, i, tuple(j + 1 for j in x0), tuple(j + 1 for j in beta0),
        H, A, L_X, patterns, keys, order, lookup,
    )


def _raise_duplicate(e1, e2, s):
    raise DuplicateSyndrome(
        f"error patterns {tuple(map(int, e1))} and {tuple(map(int, e2))} "
        f"share syndrome {tuple(map(int, s))}; the encoder is not valid"
    )


def decode(d: ReceiverDecoder, c, side_info) -> tuple[int, ...]:
    """Recover x_{X_i} from the codeword and the noisy side information."""
    c = np.asarray(c, dtype=np.int64).reshape(-1)
    xe = np.asarray(side_info, dtype=np.int64).reshape(-1)
    if c.shape[0] != d.L_X.cols:
        raise DimensionMismatch(f"codeword has length {c.shape[0]}, expected {d.L_X.cols}")
    if xe.shape[0] != len(d.X):
        raise DimensionMismatch(f"side information has length {xe.shape[0]}, expected {len(d.X)}")
    out, ok = decode_batch(d, c[None, :], xe[None, :])
    if not ok[0]:
        raise SyndromeNotFound(f"syndrome {d.syndrome(c, xe)} matches no error of weight <= {d.problem.delta_s}")
    return tuple(int(v) for v in out[0])


def decode_batch(d: ReceiverDecoder, C: np.ndarray, XE: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decode. Returns the estimates and a mask of rows whose
    syndrome was found; rows outside the mask hold the raw side information."""
    f = d.problem.field
    C = np.asarray(C, dtype=np.int64)
    XE = np.asarray(XE, dtype=np.int64)
    y = f.sub(matmul_arrays(XE, d.L_X.array, f), C)
    synd = matmul_arrays(y, d.H.array.T, f)
    eps, ok = d._lookup(synd)
    return f.sub(XE, eps), ok
