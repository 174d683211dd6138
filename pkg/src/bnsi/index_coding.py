"""Reduction from BNSI to index coding, and checks on the reduced problem.

Each BNSI user i, for every demanded p and every Q of size
min(|X_i| - 1, 2 delta_s - 1) inside X_i \\ {p}, becomes an index-coding
user demanding x_p with clean side information X_i \\ (Q + {p}). The
interfering sets of the two problems coincide, so an encoder is valid
for one exactly when it is valid for the other.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator

import numpy as np

from . import kernels
from .errors import DimensionMismatch, ParseError, TooLarge
from .gf import FieldSpec, FqMatrix, codes_to_vectors
from .problem import ENUM_GUARD, BnsiProblem, parse_kv
from .validity import ValidityResult

ACYCLIC_GUARD_BITS = 20
_CHUNK = 2**18


@dataclass(frozen=True)
class IndexCodingProblem:
    """Users are (demand, side information) pairs, indices 1-based.

    ``provenance[j]`` is the (user, p, Q) triple that generated user j.
    ``m_hat_formula`` counts users before deduplication and
    ``m_distinct`` after; ``users`` holds the deduplicated list unless the
    reduction was asked to keep duplicates.
    """

    n: int
    users: tuple[tuple[int, frozenset[int]], ...]
    provenance: tuple[tuple[int, int, tuple[int, ...]], ...] = ()
    m_hat_formula: int = 0
    m_distinct: int = 0

    def __post_init__(self):
        for j, (f, side) in enumerate(self.users, start=1):
            if not 1 <= f <= self.n:
                raise ValueError(f"user {j}: demand {f} out of range [1, {self.n}]")
            if f in side:
                raise ValueError(f"user {j}: demand {f} is also side information")
            if any(not 1 <= s <= self.n for s in side):
                raise ValueError(f"user {j}: side information out of range [1, {self.n}]")

    @property
    def m(self) -> int:
        return len(self.users)


def m_hat(p: BnsiProblem) -> int:
    """sum_i |X_i| * C(|X_i| - 1, 2 delta_s - 1); zero when delta_s = 0."""
    if p.delta_s == 0:
        return 0
    total = 0
    for x in p.demands:
        size = min(len(x) - 1, p.two_delta - 1)
        total += len(x) * comb(len(x) - 1, size)
    return total


def _colex(items: tuple[int, ...], size: int):
    return sorted(combinations(items, size), key=lambda c: c[::-1])


def reduce_to_ic(p: BnsiProblem, *, dedupe: bool = True) -> IndexCodingProblem:
    """Generate index-coding users, users ascending, p ascending, Q in colex
    order. With ``dedupe`` only the first of identical users is kept."""
    generated, prov = [], []
    if p.delta_s > 0:
        for i, x in enumerate(p.demands, start=1):
            size = min(len(x) - 1, p.two_delta - 1)
            for j in x:
                rest = tuple(v for v in x if v != j)
                for Q in _colex(rest, size):
                    side = frozenset(rest) - set(Q)
                    generated.append((j, side))
                    prov.append((i, j, Q))
    seen = {}
    for k, u in enumerate(generated):
        seen.setdefault(u, k)
    keep = sorted(seen.values()) if dedupe else list(range(len(generated)))
    return IndexCodingProblem(
        p.n,
        tuple(generated[k] for k in keep),
        tuple(prov[k] for k in keep),
        len(generated),
        len(seen),
    )


def _side_mask(side) -> int:
    mask = 0
    for s in side:
        mask |= 1 << (s - 1)
    return mask


def ic_interfering_mask(ic: IndexCodingProblem, f: FieldSpec) -> np.ndarray:
    """Membership in I_IC over all q^n vector codes."""
    if f.q**ic.n > ENUM_GUARD:
        raise TooLarge(f"q^n = {f.q}^{ic.n} exceeds the enumeration guard 2^28")
    total = f.q**ic.n
    out = np.zeros(total, dtype=bool)
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        nz = codes_to_vectors(codes, f.q, ic.n) != 0
        hit = np.zeros(codes.shape[0], dtype=bool)
        for dem, side in ic.users:
            ok = nz[:, dem - 1].copy()
            if side:
                ok &= ~nz[:, [s - 1 for s in sorted(side)]].any(axis=1)
            hit |= ok
        out[start:start + codes.shape[0]] = hit
    return out


def ic_interfering_codes(ic: IndexCodingProblem, f: FieldSpec) -> np.ndarray:
    return np.flatnonzero(ic_interfering_mask(ic, f)).astype(np.int64)


def ic_interfering_set(ic: IndexCodingProblem, f: FieldSpec) -> Iterator[tuple[int, ...]]:
    """Yield I_IC in lexicographic order."""
    codes = ic_interfering_codes(ic, f)
    for start in range(0, codes.shape[0], _CHUNK):
        for row in codes_to_vectors(codes[start:start + _CHUNK], f.q, ic.n).tolist():
            yield tuple(row)


def ic_is_valid(ic: IndexCodingProblem, L: FqMatrix) -> ValidityResult:
    """zL != 0 for every z in I_IC; the witness is the least failing z."""
    if L.rows != ic.n:
        raise DimensionMismatch(f"encoder has {L.rows} rows, problem has n = {ic.n}")
    f = L.field
    codes = ic_interfering_codes(ic, f)
    La = np.ascontiguousarray(L.array)
    for start in range(0, codes.shape[0], _CHUNK):
        z = np.ascontiguousarray(codes_to_vectors(codes[start:start + _CHUNK], f.q, ic.n))
        if L.cols == 0:
            hit = 0 if z.shape[0] else -1
        else:
            hit = kernels.first_zero_product(z, La, *f.kernel_args())
        if hit >= 0:
            return ValidityResult(False, "index-coding", tuple(int(v) for v in z[hit]))
    return ValidityResult(True, "index-coding")


def _peelable(subset: int, by_demand: dict[int, list[int]]) -> bool:
    """Whether the messages in ``subset`` can be removed one at a time, each
    by a user demanding it whose side information misses the rest."""
    R = subset
    while R:
        for j, sides in by_demand.items():
            bit = 1 << j
            if R & bit and any(not (s & R & ~bit) for s in sides):
                R &= ~bit
                break
        else:
            return False
    return True


def ic_acyclic_lower_bound(ic: IndexCodingProblem) -> int:
    """Size of a largest message set whose induced side-information graph
    is acyclic once each message keeps a suitable single user.

    On such a set, with the other messages fixed to zero, the users decode
    the set one message at a time, so the encoder is injective there and
    needs at least that many symbols. Messages nobody demands are free and
    never count.
    """
    n = ic.n
    if n > ACYCLIC_GUARD_BITS:
        raise TooLarge(f"2^{n} subsets exceed the guard 2^{ACYCLIC_GUARD_BITS}")
    by_demand: dict[int, list[int]] = {}
    for dem, side in ic.users:
        by_demand.setdefault(dem - 1, []).append(_side_mask(side))
    pool = sorted(by_demand)
    for size in range(len(pool), 0, -1):
        for idx in combinations(pool, size):
            subset = 0
            for j in idx:
                subset |= 1 << j
            if _peelable(subset, by_demand):
                return size
    return 0


# file format: "key = json" lines, users as [demand, [side...]]

_IC_KEYS = {"n", "m_hat", "users", "provenance"}


def save_ic(ic: IndexCodingProblem) -> str:
    users = [[f, sorted(side)] for f, side in ic.users]
    lines = [
        f"n = {ic.n}",
        f"m_hat = {ic.m_hat_formula}",
        f"users = {json.dumps(users)}",
    ]
    if ic.provenance:
        prov = [[i, j, list(Q)] for i, j, Q in ic.provenance]
        lines.append(f"provenance = {json.dumps(prov)}")
    return "\n".join(lines) + "\n"


def load_ic(text: str) -> IndexCodingProblem:
    values, lines = parse_kv(text, _IC_KEYS)
    for key in ("n", "users"):
        if key not in values:
            raise ParseError(f"missing key {key!r}")
    try:
        users = tuple((int(f), frozenset(int(s) for s in side)) for f, side in values["users"])
    except (TypeError, ValueError):
        raise ParseError("users must be a list of [demand, [side...]] pairs", lines["users"]) from None
    prov = ()
    if "provenance" in values:
        prov = tuple((int(i), int(j), tuple(Q)) for i, j, Q in values["provenance"])
    try:
        return IndexCodingProblem(
            int(values["n"]), users, prov, int(values.get("m_hat", len(users))), len(set(users))
        )
    except ValueError as e:
        raise ParseError(str(e), lines["users"]) from None
