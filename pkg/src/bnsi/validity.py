"""Is L a valid encoder? Two independent routes that must agree.

Enumeration: zL != 0 for every z in the interfering set I.

Rank: for every user i and every S in X_i of size s = min(2 delta_s, |X_i|),
the rows L_S stay independent modulo rowspan(L_{Y_i}). Testing only the
largest subsets suffices because a subfamily of a family that is
independent modulo a subspace is itself independent modulo it.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .errors import DimensionMismatch, FieldError, TooLarge
from .gf import FqMatrix, codes_to_vectors, rref_array
from .problem import BnsiProblem, interfering_codes

RANK_GUARD = 2**24
_CHUNK = 2**16


@dataclass(frozen=True)
class ValidityResult:
    """Outcome of a check. Truthy when valid.

    ``witness`` is the least violating z (enumeration) or the least
    violating (user, S) pair (rank and necessary checks), 1-based.
    """

    valid: bool
    method: str
    witness: tuple | None = None

    def __bool__(self):
        return self.valid


def as_encoder(p: BnsiProblem, L) -> FqMatrix:
    """Coerce ``L`` to an FqMatrix over the problem's field with n rows."""
    if not isinstance(L, FqMatrix):
        arr = np.asarray(L, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(p.n, 0)
        L = FqMatrix(arr, p.field)
    if L.field != p.field:
        raise FieldError(f"encoder is over {L.field}, problem over {p.field}")
    if L.rows != p.n:
        raise DimensionMismatch(f"encoder has {L.rows} rows, problem has n = {p.n}")
    return L


def is_valid_by_enumeration(p: BnsiProblem, L) -> ValidityResult:
    L = as_encoder(p, L)
    codes = interfering_codes(p)
    args = p.field.kernel_args()
    La = np.ascontiguousarray(L.array)
    for start in range(0, codes.shape[0], _CHUNK):
        z = np.ascontiguousarray(codes_to_vectors(codes[start:start + _CHUNK], p.q, p.n))
        if L.cols == 0:
            hit = 0 if z.shape[0] else -1
        else:
            hit = kernels.first_zero_product(z, La, *args)
        if hit >= 0:
            return ValidityResult(False, "enumeration", tuple(int(v) for v in z[hit]))
    return ValidityResult(True, "enumeration")


def _subset_size(p: BnsiProblem, i0: int) -> int:
    return min(p.two_delta, len(p.x0[i0]))


def _check_rank_guard(p: BnsiProblem):
    total = sum(comb(len(x), _subset_size(p, i)) for i, x in enumerate(p.x0))
    if total > RANK_GUARD:
        raise TooLarge(f"{total} subset checks exceed the guard 2^24")


def _rank(a: np.ndarray, field) -> int:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    return len(rref_array(a, field)[1])


def is_valid_by_rank(p: BnsiProblem, L) -> ValidityResult:
    L = as_encoder(p, L)
    _check_rank_guard(p)
    a = L.array
    for i0, x in enumerate(p.x0):
        s = _subset_size(p, i0)
        if s == 0:
            continue
        ly = a[list(p.y0[i0])]
        r_y = _rank(ly, p.field)
        for S in combinations(x, s):
            stacked = np.vstack([ly, a[list(S)]])
            if _rank(stacked, p.field) != r_y + s:
                return ValidityResult(False, "rank", (i0 + 1, tuple(j + 1 for j in S)))
    return ValidityResult(True, "rank")


def necessary_check(p: BnsiProblem, L) -> ValidityResult:
    """Every min(2 delta_s, |X_i|) rows of L_{X_i} are independent.

    Implied by validity but weaker: it ignores the rows in Y_i.
    """
    L = as_encoder(p, L)
    _check_rank_guard(p)
    a = L.array
    for i0, x in enumerate(p.x0):
        s = _subset_size(p, i0)
        for S in combinations(x, s):
            if s and _rank(a[list(S)], p.field) != s:
                return ValidityResult(False, "necessary", (i0 + 1, tuple(j + 1 for j in S)))
    return ValidityResult(True, "necessary")


def is_valid(p: BnsiProblem, L, method: str = "rank") -> ValidityResult:
    """Run one route, or ``both`` and insist they agree."""
    if method == "enumeration" or method == "enum":
        return is_valid_by_enumeration(p, L)
    if method == "rank":
        return is_valid_by_rank(p, L)
    if method == "both":
        a = is_valid_by_enumeration(p, L)
        b = is_valid_by_rank(p, L)
        if a.valid != b.valid:
            raise AssertionError(f"validity routes disagree: enumeration={a.valid}, rank={b.valid}")
        return b if not b.valid else a
    raise ValueError(f"unknown method {method!r}")
