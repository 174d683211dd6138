"""Encoder constructions and bounds on the optimal codelength N_opt."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from . import kernels
from .codes import DISTANCE_GUARD, LinearCodeSpec, mds_parity_check, mds_realizable, min_distance
from .errors import (
    DimensionMismatch,
    DistanceTooSmall,
    GuardExceeded,
    InvalidEncoder,
    PreconditionViolated,
    TooLarge,
)
from .gf import FqMatrix
from .problem import BnsiProblem, induced_subproblem
from .structure import b_max, c_max, disjoint_phi_collection, phi_emptiness
from .validity import is_valid_by_rank

PARTITION_EXACT_MAX = 12


def _plus(x: int) -> int:
    return x if x > 0 else 0


@dataclass(frozen=True, eq=False)
class Bound:
    """A bound value with the object that certifies it.

    ``value`` is None when the bound is unavailable; ``reason`` says why.
    Upper bounds carry the encoder ``matrix`` that achieves them.
    """

    name: str
    value: int | None
    tag: str
    witness: object = None
    matrix: FqMatrix | None = None
    reason: str | None = None

    @property
    def available(self) -> bool:
        return self.value is not None

    def __iter__(self):  # allows ``N, L = upper_bound_...(p)``
        yield self.value
        yield self.matrix


def _revalidate(p: BnsiProblem, L: FqMatrix, what: str):
    if not is_valid_by_rank(p, L):
        raise InvalidEncoder(f"{what} produced an invalid encoder")


# constructions


def simple_scheme(p: BnsiProblem, *, check: bool = False) -> FqMatrix:
    """L = [I_{n-1}; 1 ... 1], valid when every |X_i| >= 2 delta_s + 1."""
    short = [i for i, x in enumerate(p.demands, start=1) if len(x) < p.two_delta + 1]
    if short:
        raise PreconditionViolated(
            f"users {short} demand fewer than 2*delta_s+1 = {p.two_delta + 1} messages"
        )
    a = np.zeros((p.n, p.n - 1), dtype=np.int64)
    a[: p.n - 1] = np.eye(p.n - 1, dtype=np.int64)
    a[p.n - 1] = 1
    L = FqMatrix(a, p.field)
    if check:
        _revalidate(p, L, "simple scheme")
    return L


def eta(p: BnsiProblem) -> int:
    """2 delta_s + max_i |Y_i|: an ECC of distance eta + 1 yields an encoder."""
    return p.two_delta + max((p.n - len(x) for x in p.demands), default=0)


def ecc_based_encoder(p: BnsiProblem, c: LinearCodeSpec, *, check: bool = False) -> FqMatrix:
    """L = H^T for a code of length n with minimum distance >= eta + 1.

    The distance is measured by brute force when that fits the guard,
    otherwise the code's claimed distance is trusted.
    """
    if c.n != p.n:
        raise DimensionMismatch(f"code length {c.n} differs from n = {p.n}")
    if c.field != p.field:
        raise DimensionMismatch(f"code is over {c.field}, problem over {p.field}")
    need = eta(p) + 1
    if c.k == 0 or c.field.q**c.k <= DISTANCE_GUARD:
        d = min_distance(c)
    elif c.d_min is not None:
        d = c.d_min
    else:
        raise TooLarge("code too large to measure its distance and none was claimed")
    if d < need:
        raise DistanceTooSmall(need, d)
    L = c.H.T
    if check:
        _revalidate(p, L, "ECC construction")
    return L


def block_diagonal(p: BnsiProblem, blocks: list[tuple[tuple[int, ...], FqMatrix]]) -> FqMatrix:
    """Stack per-block encoders on disjoint message sets; messages outside
    every block are sent uncoded (identity columns, in index order)."""
    used = set()
    for rows, _ in blocks:
        used.update(rows)
    rest = [j for j in range(1, p.n + 1) if j not in used]
    N = sum(B.cols for _, B in blocks) + len(rest)
    a = np.zeros((p.n, N), dtype=np.int64)
    col = 0
    for rows, B in blocks:
        idx = [j - 1 for j in rows]
        a[np.ix_(idx, range(col, col + B.cols))] = B.array
        col += B.cols
    for j in rest:
        a[j - 1, col] = 1
        col += 1
    return FqMatrix(a, p.field)


def saving(p: BnsiProblem, C) -> int:
    """d_C = min over users touching C of (|X_i cap C| - 2 delta_s)^+.

    With no user touching C every packet of C can be dropped, so d_C = |C|.
    """
    C = set(C)
    degs = [len(C.intersection(x)) for x in p.demands]
    touched = [_plus(d - p.two_delta) for d in degs if d > 0]
    return min(touched) if touched else len(C)


def _mds_block(p: BnsiProblem, rows, k: int) -> FqMatrix:
    """Encoder rows for messages ``rows`` from an [|rows|, k] MDS code."""
    code = mds_parity_check(p.field, len(rows), k)
    return code.H.T


# lower bounds


def lower_bound_size(p: BnsiProblem) -> Bound:
    """|X_S| + min(2 delta_s, n_d - |X_S|), S the users with |X_i| <= 2 delta_s.

    n_d counts demanded messages; messages nobody demands need no
    transmission and would otherwise inflate the bound.
    """
    S = [i for i, x in enumerate(p.demands, start=1) if 1 <= len(x) <= p.two_delta]
    XS = set()
    for i in S:
        XS.update(p.X(i))
    n_d = len(p.demanded)
    value = len(XS) + min(p.two_delta, n_d - len(XS))
    return Bound("lower_size", value, "demand-size bound", witness=frozenset(XS))


def lower_bound_bmax(p: BnsiProblem) -> Bound:
    try:
        B = b_max(p)
    except GuardExceeded as e:
        return Bound("lower_bmax", None, "B_max bound", reason=str(e))
    return Bound("lower_bmax", len(B), "B_max bound", witness=B)


# upper bounds


def upper_bound_trivial(p: BnsiProblem) -> Bound:
    return Bound("upper_trivial", p.n, "uncoded", matrix=FqMatrix.identity(p.n, p.field))


def upper_bound_mds(p: BnsiProblem) -> Bound:
    """n - k' with k' = min_i (|X_i| - 2 delta_s)^+, from one MDS code."""
    name, tag = "upper_ecc", "MDS code bound"
    if p.m == 0:
        return Bound(name, 0, tag, witness=p.n, matrix=FqMatrix.zeros(p.n, 0, p.field))
    k = min(_plus(len(x) - p.two_delta) for x in p.demands)
    if not mds_realizable(p.q, p.n, k):
        return Bound(name, None, tag, reason=f"no [{p.n},{k}] MDS code constructed over GF({p.q})")
    L = _mds_block(p, tuple(range(1, p.n + 1)), k)
    return Bound(name, p.n - k, tag, witness=k, matrix=L)


def upper_bound_disjoint(p: BnsiProblem) -> Bound:
    """n - |c|: the simple scheme on every part of a disjoint Phi collection."""
    coll = disjoint_phi_collection(p)
    blocks = []
    for C in coll.parts:
        rows = tuple(sorted(C))
        sub, _ = induced_subproblem(p, rows)
        blocks.append((rows, simple_scheme(sub)))
    L = block_diagonal(p, blocks)
    return Bound("upper_disjoint", L.cols, "disjoint collection bound", witness=coll, matrix=L)


def upper_bound_mds_disjoint(p: BnsiProblem) -> Bound:
    """n - sum of d_C over the parts, with an MDS code on every part."""
    name, tag = "upper_mds_disjoint", "disjoint collection MDS bound"
    coll = disjoint_phi_collection(p)
    blocks = []
    for C in coll.parts:
        rows = tuple(sorted(C))
        k = saving(p, rows)
        if not mds_realizable(p.q, len(rows), k):
            return Bound(name, None, tag, witness=coll,
                         reason=f"no [{len(rows)},{k}] MDS code constructed over GF({p.q})")
        blocks.append((rows, _mds_block(p, rows, k)))
    L = block_diagonal(p, blocks)
    return Bound(name, L.cols, tag, witness=coll, matrix=L)


@dataclass(frozen=True, eq=False)
class PartitionResult:
    """Outcome of the partition search over C_max.

    ``D_sum`` is the saving realized over the problem's field. ``d_sum_ideal``
    is the objective value of the same search when every block may use an
    MDS code of any length; the two agree whenever q is large enough.
    """

    D_sum: int
    d_sum_ideal: int
    partition: tuple[frozenset[int], ...]
    matrix: FqMatrix
    mode: str
    savings: tuple[int, ...] = dc_field(default=())


def _block_value(p: BnsiProblem, rows, field_aware: bool) -> int:
    d = saving(p, rows)
    if not field_aware or mds_realizable(p.q, len(rows), d):
        return d
    return min(d, 1)


def _value_table(p: BnsiProblem, elems: list[int], field_aware: bool) -> np.ndarray:
    s = len(elems)
    vals = np.zeros(1 << s, dtype=np.int64)
    for mask in range(1, 1 << s):
        rows = [elems[b] for b in range(s) if mask >> b & 1]
        vals[mask] = _block_value(p, rows, field_aware)
    return vals


def _local_search(p: BnsiProblem, parts: list[set[int]]) -> list[set[int]]:
    def total(ps):
        return sum(_block_value(p, sorted(b), True) for b in ps if b)

    best = total(parts)
    improved = True
    while improved:
        improved = False
        for a, b in combinations(range(len(parts)), 2):
            trial = [x for k, x in enumerate(parts) if k not in (a, b)] + [parts[a] | parts[b]]
            if total(trial) > best:
                parts, best, improved = trial, total(trial), True
                break
        if improved:
            continue
        for a in range(len(parts)):
            for j in sorted(parts[a]):
                for b in range(len(parts) + 1):
                    if b == a:
                        continue
                    trial = [set(x) for x in parts] + [set()]
                    trial[a].discard(j)
                    trial[b].add(j)
                    trial = [x for x in trial if x]
                    if total(trial) > best:
                        parts, best, improved = trial, total(trial), True
                        break
                if improved:
                    break
            if improved:
                break
    return parts


def partition_optimizer(p: BnsiProblem, mode: str | None = None) -> PartitionResult | None:
    """Split C_max into blocks, code each block with an MDS code, maximize
    the total saving. Returns None when Phi is empty.

    Exact mode (|C_max| <= 12) scans every set partition as restricted
    growth strings and keeps the lexicographically first maximum. Greedy
    mode starts from the disjoint collection and improves it by merging
    blocks and moving single packets.
    """
    C = c_max(p)
    if C is None:
        return None
    elems = sorted(C)
    s = len(elems)
    if mode is None:
        mode = "exact" if s <= PARTITION_EXACT_MAX else "greedy"
    if mode == "exact":
        if s > PARTITION_EXACT_MAX:
            raise TooLarge(f"|C_max| = {s} exceeds the exact partition limit {PARTITION_EXACT_MAX}")
        vals = _value_table(p, elems, True)
        D, rgs = kernels.best_partition(vals, s)
        ideal, _ = kernels.best_partition(_value_table(p, elems, False), s)
        parts = [set() for _ in range(max(rgs) + 1)]
        for b, label in enumerate(rgs):
            parts[label].add(elems[b])
    elif mode == "greedy":
        coll = disjoint_phi_collection(p)
        parts = [set(x) for x in coll.parts]
        rest = set(elems) - set().union(*parts) if parts else set(elems)
        if rest:
            parts.append(rest)
        parts = _local_search(p, parts)
        D = sum(_block_value(p, sorted(b), True) for b in parts)
        ideal = sum(_block_value(p, sorted(b), False) for b in parts)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    blocks, savings = [], []
    for part in parts:
        rows = tuple(sorted(part))
        k = _block_value(p, rows, True)
        savings.append(k)
        blocks.append((rows, _mds_block(p, rows, k)))
    L = block_diagonal(p, blocks)
    return PartitionResult(
        int(D), int(ideal), tuple(frozenset(x) for x in parts), L, mode, tuple(savings)
    )


def upper_bound_partition(p: BnsiProblem) -> Bound:
    name, tag = "upper_partition", "C_max partition bound"
    try:
        res = partition_optimizer(p)
    except GuardExceeded as e:
        return Bound(name, None, tag, reason=str(e))
    if res is None:
        return Bound(name, p.n, tag, matrix=FqMatrix.identity(p.n, p.field),
                     reason="Phi is empty; uncoded transmission")
    return Bound(name, p.n - res.D_sum, tag, witness=res, matrix=res.matrix)


# aggregation


@dataclass(frozen=True, eq=False)
class BoundsReport:
    problem: BnsiProblem
    bounds: dict[str, Bound]
    oracle: int | None
    oracle_matrix: FqMatrix | None
    phi_empty: bool
    violations: tuple[str, ...]

    LOWER = ("lower_size", "lower_bmax", "lower_ic_acyclic")
    UPPER = ("upper_trivial", "upper_ecc", "upper_disjoint", "upper_mds_disjoint", "upper_partition")

    def __getattr__(self, name):
        bounds = object.__getattribute__(self, "bounds")
        if name in bounds:
            return bounds[name].value
        raise AttributeError(name)

    @property
    def best_lower(self) -> int:
        return max(b.value for k, b in self.bounds.items() if k in self.LOWER and b.available)

    @property
    def best_upper(self) -> int:
        return min(b.value for k, b in self.bounds.items() if k in self.UPPER and b.available)

    def as_dict(self) -> dict:
        out = {
            "problem": {
                "q": self.problem.q,
                "n": self.problem.n,
                "m": self.problem.m,
                "delta_s": self.problem.delta_s,
                "demands": [list(x) for x in self.problem.demands],
            },
            "phi_empty": self.phi_empty,
        }
        for name, b in self.bounds.items():
            out[name] = {"value": b.value, "tag": b.tag, "witness": _plain(b.witness)}
            if b.reason:
                out[name]["reason"] = b.reason
        out["best_lower"] = self.best_lower
        out["best_upper"] = self.best_upper
        out["oracle_N_opt"] = self.oracle
        out["violations"] = list(self.violations)
        return out


def _plain(w):
    from .structure import DisjointCollection

    if w is None or isinstance(w, (int, str)):
        return w
    if isinstance(w, frozenset):
        return sorted(w)
    if isinstance(w, DisjointCollection):
        return {"parts": [sorted(c) for c in w.parts], "mode": w.mode}
    if isinstance(w, PartitionResult):
        return {
            "partition": [sorted(c) for c in w.partition],
            "D_sum": w.D_sum,
            "d_sum_ideal": w.d_sum_ideal,
            "mode": w.mode,
        }
    return str(w)


def bounds_report(p: BnsiProblem, *, oracle: bool = True, check: bool = True) -> BoundsReport:
    """Every bound that fits its guard, plus the exact optimum when the
    subspace oracle can afford it. ``check`` revalidates every emitted
    encoder and records any lower > upper conflict."""
    from .index_coding import ic_acyclic_lower_bound, reduce_to_ic
    from .oracle import optimal_codelength_subspace

    bounds = {}
    bounds["lower_size"] = lower_bound_size(p)
    bounds["lower_bmax"] = lower_bound_bmax(p)
    try:
        v = ic_acyclic_lower_bound(reduce_to_ic(p))
        bounds["lower_ic_acyclic"] = Bound("lower_ic_acyclic", v, "acyclic index-coding bound")
    except GuardExceeded as e:
        bounds["lower_ic_acyclic"] = Bound("lower_ic_acyclic", None, "acyclic index-coding bound",
                                           reason=str(e))
    bounds["upper_trivial"] = upper_bound_trivial(p)
    bounds["upper_ecc"] = upper_bound_mds(p)
    bounds["upper_disjoint"] = upper_bound_disjoint(p)
    bounds["upper_mds_disjoint"] = upper_bound_mds_disjoint(p)
    bounds["upper_partition"] = upper_bound_partition(p)

    n_opt = L_opt = None
    if oracle:
        try:
            n_opt, L_opt = optimal_codelength_subspace(p)
        except GuardExceeded:
            pass

    violations = []
    lows = [b for k, b in bounds.items() if k in BoundsReport.LOWER and b.available]
    ups = [b for k, b in bounds.items() if k in BoundsReport.UPPER and b.available]
    for lo in lows:
        for up in ups:
            if lo.value > up.value:
                violations.append(f"{lo.name} = {lo.value} > {up.name} = {up.value}")
        if n_opt is not None and lo.value > n_opt:
            violations.append(f"{lo.name} = {lo.value} > N_opt = {n_opt}")
    for up in ups:
        if n_opt is not None and n_opt > up.value:
            violations.append(f"N_opt = {n_opt} > {up.name} = {up.value}")
        if check and up.matrix is not None:
            if up.matrix.cols != up.value:
                violations.append(f"{up.name}: matrix has {up.matrix.cols} columns, bound {up.value}")
            try:
                if not is_valid_by_rank(p, up.matrix):
                    violations.append(f"{up.name}: emitted encoder is not valid")
            except GuardExceeded:
                pass
    return BoundsReport(
        p, bounds, n_opt, L_opt, phi_emptiness(p).is_empty, tuple(violations)
    )
