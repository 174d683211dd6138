"""The family Phi of packet sets C on which every user's demand is either
untouched or hit at least 2 delta_s + 1 times.

Phi is nonempty exactly when coding beats uncoded transmission. It is
closed under union, so it has a unique largest element C_max, which the
peeling procedure below finds.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable

import numpy as np

from . import kernels
from ._kernels_py import phi_peel as _peel_py
from .errors import TooLarge
from .problem import BnsiProblem

BMAX_GUARD_BITS = 24
EXACT_DISJOINT_BITS = 20


def _to_mask(p: BnsiProblem, C: Iterable[int]) -> int:
    mask = 0
    for j in C:
        if not 1 <= j <= p.n:
            raise ValueError(f"index {j} out of range [1, {p.n}]")
        mask |= 1 << (j - 1)
    return mask


def _from_mask(mask: int) -> frozenset[int]:
    out, j = [], 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return frozenset(out)


def _in_phi(masks, C: int, two_delta: int) -> bool:
    if C == 0:
        return False
    for m in masks:
        deg = (m & C).bit_count()
        if 1 <= deg <= two_delta:
            return False
    return True


def phi_contains(p: BnsiProblem, C: Iterable[int]) -> bool:
    return _in_phi(p.masks, _to_mask(p, C), p.two_delta)


def phi_degrees(p: BnsiProblem, C: Iterable[int]) -> tuple[int, ...]:
    """|X_i intersect C| for every user."""
    c = set(C)
    return tuple(len(c.intersection(x)) for x in p.demands)


@dataclass(frozen=True)
class PhiResult:
    is_empty: bool
    witness: frozenset[int] | None
    deleted_users: tuple[int, ...]


def phi_emptiness(p: BnsiProblem) -> PhiResult:
    """Peel away users of degree 1..2 delta_s together with their packets.

    Users are picked lowest index first. What survives, if anything, is
    C_max. The shortcut "at most 2 delta_s packets left means Phi is empty"
    is taken only when every remaining packet is still demanded by a
    remaining user; a packet nobody demands is on its own a member of Phi.
    """
    two_delta = p.two_delta
    P = (1 << p.n) - 1
    active = list(range(p.m))
    deleted = []
    while P:
        active = [i for i in active if p.masks[i] & P]
        covered = 0
        for i in active:
            covered |= p.masks[i]
        if P.bit_count() <= two_delta and P & ~covered == 0:
            return PhiResult(True, None, tuple(deleted))
        pick = next((i for i in active if (p.masks[i] & P).bit_count() <= two_delta), None)
        if pick is None:
            return PhiResult(False, _from_mask(P), tuple(deleted))
        P &= ~p.masks[pick]
        deleted.append(pick + 1)
        active.remove(pick)
    return PhiResult(True, None, tuple(deleted))


def c_max(p: BnsiProblem) -> frozenset[int] | None:
    return phi_emptiness(p).witness


def _largest_phi_in(p: BnsiProblem, P: int) -> int:
    if p.n <= 62:
        return int(kernels.phi_peel(p.masks_array, P, p.two_delta))
    return int(_peel_py(p.masks, P, p.two_delta))


def largest_phi_within(p: BnsiProblem, B: Iterable[int]) -> frozenset[int]:
    """Largest Phi element contained in B (empty when there is none)."""
    return _from_mask(_largest_phi_in(p, _to_mask(p, B)))


def b_max(p: BnsiProblem) -> frozenset[int]:
    """A largest B whose induced subproblem has empty Phi.

    Sizes are tried from n downward and, within a size, subsets in
    lexicographic order, so the result is the lexicographically least
    among the largest.
    """
    if p.n > BMAX_GUARD_BITS:
        raise TooLarge(f"2^{p.n} subsets exceed the guard 2^{BMAX_GUARD_BITS}")
    return _from_mask(int(kernels.bmax_search(p.masks_array, p.n, p.two_delta)))


# all of Phi at once, as a boolean table indexed by packet mask


def phi_table(p: BnsiProblem) -> np.ndarray:
    if p.n > EXACT_DISJOINT_BITS:
        raise TooLarge(f"2^{p.n} subsets exceed the guard 2^{EXACT_DISJOINT_BITS}")
    size = 1 << p.n
    ids = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for b in range(p.n):
        pop += (ids >> b) & 1
    bad = np.zeros(size, dtype=bool)
    for m in p.masks:
        deg = pop[ids & m]
        bad |= (deg >= 1) & (deg <= p.two_delta)
    table = ~bad
    table[0] = False
    return table


def minimal_phi_masks(p: BnsiProblem) -> list[int]:
    """Inclusion-minimal members of Phi, ascending by mask."""
    table = phi_table(p)
    size = table.shape[0]
    ids = np.arange(size, dtype=np.int64)
    below = table.copy()  # below[M]: some subset of M (M included) is in Phi
    for b in range(p.n):
        has = (ids >> b) & 1 == 1
        below[has] |= below[ids[has] ^ (1 << b)]
    strict = np.zeros(size, dtype=bool)
    for b in range(p.n):
        has = (ids >> b) & 1 == 1
        strict[has] |= below[ids[has] ^ (1 << b)]
    return [int(x) for x in np.flatnonzero(table & ~strict)]


@dataclass(frozen=True)
class DisjointCollection:
    parts: tuple[frozenset[int], ...]
    mode: str

    def __len__(self):
        return len(self.parts)


def _sorted_key(parts):
    return sorted(tuple(sorted(_from_mask(m))) for m in parts)


def _exact_packing(p: BnsiProblem) -> list[int]:
    """Most pairwise-disjoint minimal Phi elements; lexicographic tie-break."""
    minimal = minimal_phi_masks(p)
    by_low: dict[int, list[int]] = {}
    for m in minimal:
        by_low.setdefault((m & -m).bit_length() - 1, []).append(m)

    @lru_cache(maxsize=None)
    def best(avail: int) -> tuple[int, tuple]:
        if avail == 0:
            return 0, ()
        low = (avail & -avail).bit_length() - 1
        k, parts = best(avail & ~(1 << low))
        cand = (k, _sorted_key(parts), parts)
        for m in by_low.get(low, ()):
            if m & ~avail:
                continue
            k2, parts2 = best(avail & ~m)
            trial = (k2 + 1, _sorted_key(parts2 + (m,)), parts2 + (m,))
            if trial[0] > cand[0] or (trial[0] == cand[0] and trial[1] < cand[1]):
                cand = trial
        return cand[0], cand[2]

    cmax = _largest_phi_in(p, (1 << p.n) - 1)
    _, parts = best(cmax)
    best.cache_clear()
    return sorted(parts, key=lambda m: tuple(sorted(_from_mask(m))))


def _shrink_to_minimal(p: BnsiProblem, C: int, order: list[int]) -> int:
    """Drop packets in the given order while a Phi element remains inside."""
    changed = True
    while changed:
        changed = False
        for j in order:
            if C >> j & 1:
                inner = _largest_phi_in(p, C & ~(1 << j))
                if inner:
                    C = inner
                    changed = True
                    break
    return C


def _greedy_packing(p: BnsiProblem) -> list[int]:
    """Repeatedly remove a small minimal Phi element from the packet pool.

    Candidates come from shrinking the current C_max, and the largest Phi
    element avoiding each single packet, with every rotation of the
    removal order. Preference goes to candidates that leave another
    Phi element behind, then to the smallest, then to the least.
    """
    parts = []
    P = (1 << p.n) - 1
    while True:
        C = _largest_phi_in(p, P)
        if not C:
            break
        idx = [j for j in range(p.n) if C >> j & 1]
        starts = [C] + [s for s in (_largest_phi_in(p, C & ~(1 << j)) for j in idx) if s]
        cands = set()
        for start in set(starts):
            for r in range(len(idx)):
                order = idx[r:] + idx[:r]
                cands.add(_shrink_to_minimal(p, start, order))
                cands.add(_shrink_to_minimal(p, start, order[::-1]))
        C = min(cands, key=lambda m: (
            _largest_phi_in(p, P & ~m) == 0,
            m.bit_count(),
            tuple(sorted(_from_mask(m))),
        ))
        parts.append(C)
        P &= ~C
    return sorted(parts, key=lambda m: tuple(sorted(_from_mask(m))))


def _extend_parts(p: BnsiProblem, parts: list[int]) -> list[int]:
    """Grow parts with unused C_max packets while they stay in Phi."""
    cmax = _largest_phi_in(p, (1 << p.n) - 1)
    used = 0
    for m in parts:
        used |= m
    parts = list(parts)
    changed = True
    while changed:
        changed = False
        for j in range(p.n):
            bit = 1 << j
            if not cmax & bit or used & bit:
                continue
            for k, m in enumerate(parts):
                if _in_phi(p.masks, m | bit, p.two_delta):
                    parts[k] = m | bit
                    used |= bit
                    changed = True
                    break
    return parts


def disjoint_phi_collection(p: BnsiProblem, mode: str | None = None) -> DisjointCollection:
    """A largest collection of pairwise-disjoint Phi elements.

    ``mode`` is ``exact`` (default while 2^n <= 2^20) or ``greedy``. Exact
    mode maximizes the number of parts over inclusion-minimal elements,
    breaking ties lexicographically; both modes then grow each part with
    leftover C_max packets where membership allows, which only helps
    bounds that reward larger parts.
    """
    if mode is None:
        mode = "exact" if p.n <= EXACT_DISJOINT_BITS else "greedy"
    if mode == "exact":
        parts = _exact_packing(p)
    elif mode == "greedy":
        parts = _greedy_packing(p)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    parts = _extend_parts(p, parts)
    return DisjointCollection(tuple(_from_mask(m) for m in parts), mode)


def all_phi_elements(p: BnsiProblem) -> list[frozenset[int]]:
    """Every member of Phi by direct enumeration (small n only)."""
    if p.n > EXACT_DISJOINT_BITS:
        raise TooLarge(f"2^{p.n} subsets exceed the guard 2^{EXACT_DISJOINT_BITS}")
    out = []
    for size in range(1, p.n + 1):
        for C in combinations(range(1, p.n + 1), size):
            if phi_contains(p, C):
                out.append(frozenset(C))
    return out
