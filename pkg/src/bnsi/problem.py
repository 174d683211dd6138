"""Problem instances: n messages, m users with demand sets X_i, and a bound
delta_s on the number of wrong symbols in any user's copy of X_i.

Message and user indices are 1-based in every public function, matching
how instances are written down by hand; 0-based arrays stay internal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import EmptyKeepSet, FieldError, InvalidProblem, ParseError, TooLarge
from .gf import FieldSpec, codes_to_vectors

ENUM_GUARD = 2**28
_CHUNK = 2**18


@dataclass(frozen=True)
class BnsiProblem:
    field: FieldSpec
    n: int
    demands: tuple[tuple[int, ...], ...]
    delta_s: int

    @classmethod
    def create(cls, n: int, demands: Iterable[Iterable[int]], delta_s: int, q: int | FieldSpec = 2):
        """Build, validate and canonicalize (each X_i sorted) a problem."""
        fld = q if isinstance(q, FieldSpec) else FieldSpec.of(q)
        raw = cls(fld, n, tuple(tuple(x) for x in demands), delta_s)
        errors = validate_problem(raw)
        if errors:
            raise InvalidProblem(errors)
        return cls(fld, n, tuple(tuple(sorted(x)) for x in raw.demands), delta_s)

    @property
    def m(self) -> int:
        return len(self.demands)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def two_delta(self) -> int:
        return 2 * self.delta_s

    def X(self, i: int) -> tuple[int, ...]:
        return self.demands[i - 1]

    def Y(self, i: int) -> tuple[int, ...]:
        x = set(self.demands[i - 1])
        return tuple(j for j in range(1, self.n + 1) if j not in x)

    @cached_property
    def x0(self) -> tuple[tuple[int, ...], ...]:
        """0-based demand sets."""
        return tuple(tuple(j - 1 for j in x) for x in self.demands)

    @cached_property
    def y0(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(j - 1 for j in self.Y(i + 1)) for i in range(self.m))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Demand sets as bitmasks, bit j-1 for message j."""
        return tuple(sum(1 << j for j in x) for x in self.x0)

    @property
    def masks_array(self) -> np.ndarray:
        return np.array(self.masks, dtype=np.int64)

    @property
    def demanded(self) -> frozenset[int]:
        return frozenset(j for x in self.demands for j in x)

    def with_field(self, q: int | FieldSpec) -> "BnsiProblem":
        fld = q if isinstance(q, FieldSpec) else FieldSpec.of(q)
        return BnsiProblem(fld, self.n, self.demands, self.delta_s)

    def __str__(self):
        xs = ", ".join("{" + ",".join(map(str, x)) + "}" for x in self.demands)
        return f"BNSI(q={self.q}, n={self.n}, m={self.m}, delta_s={self.delta_s}, X=[{xs}])"


@dataclass(frozen=True)
class BipartiteView:
    users: tuple[int, ...]
    packets: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    user_adj: dict = dc_field(hash=False)
    packet_adj: dict = dc_field(hash=False)

    def degree(self, user: int) -> int:
        return len(self.user_adj[user])


def bipartite(p: BnsiProblem) -> BipartiteView:
    """User/packet graph with an edge (i, j) whenever user i demands message j."""
    users = tuple(range(1, p.m + 1))
    packets = tuple(range(1, p.n + 1))
    edges = tuple((i, j) for i in users for j in p.X(i))
    uadj = {i: frozenset(p.X(i)) for i in users}
    padj = {j: frozenset(i for i in users if j in uadj[i]) for j in packets}
    return BipartiteView(users, packets, edges, uadj, padj)


def validate_problem(p: BnsiProblem) -> list[str]:
    """All invariant violations, each prefixed by a path; empty when valid."""
    errors = []
    if not isinstance(p.field, FieldSpec):
        errors.append("field: unsupported field")
    if not isinstance(p.n, int) or isinstance(p.n, bool) or p.n < 1:
        errors.append(f"n: must be a positive integer, got {p.n!r}")
        return errors
    if not isinstance(p.delta_s, int) or isinstance(p.delta_s, bool) or p.delta_s < 0:
        errors.append(f"delta_s: must be a non-negative integer, got {p.delta_s!r}")
    for i, x in enumerate(p.demands, start=1):
        path = f"demands[{i}]"
        if len(x) == 0:
            errors.append(f"{path}: empty demand set")
            continue
        seen = set()
        for j in x:
            if not isinstance(j, int) or isinstance(j, bool):
                errors.append(f"{path}: index {j!r} is not an integer")
            elif not 1 <= j <= p.n:
                errors.append(f"{path}: index {j} out of range [1, {p.n}]")
            elif j in seen:
                errors.append(f"{path}: duplicate index {j}")
            seen.add(j)
    return errors


def lint_problem(p: BnsiProblem) -> list[str]:
    """Legal but suspicious features: undemanded messages, repeated users."""
    warnings = []
    missing = sorted(set(range(1, p.n + 1)) - p.demanded)
    if missing:
        warnings.append(f"messages demanded by no user: {missing}")
    first = {}
    for i, x in enumerate(p.demands, start=1):
        key = frozenset(x)
        if key in first:
            warnings.append(f"user {i} repeats the demand set of user {first[key]}")
        else:
            first[key] = i
    return warnings


def _check_guard(p: BnsiProblem):
    if p.q**p.n > ENUM_GUARD:
        raise TooLarge(f"q^n = {p.q}^{p.n} exceeds the enumeration guard 2^28")


def interfering_mask(p: BnsiProblem) -> np.ndarray:
    """Boolean array over all q^n vector codes marking membership in I."""
    _check_guard(p)
    total = p.q**p.n
    out = np.zeros(total, dtype=bool)
    if p.delta_s == 0 or p.m == 0:
        return out
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        nz = codes_to_vectors(codes, p.q, p.n) != 0
        hit = np.zeros(codes.shape[0], dtype=bool)
        for x in p.x0:
            w = nz[:, list(x)].sum(axis=1)
            hit |= (w >= 1) & (w <= p.two_delta)
        out[start:start + codes.shape[0]] = hit
    return out


def interfering_codes(p: BnsiProblem) -> np.ndarray:
    """Sorted codes of I; sorting codes is lexicographic order on vectors."""
    return np.flatnonzero(interfering_mask(p)).astype(np.int64)


def interfering_vectors(p: BnsiProblem) -> np.ndarray:
    return codes_to_vectors(interfering_codes(p), p.q, p.n)


def interfering_set(p: BnsiProblem) -> Iterator[tuple[int, ...]]:
    """Yield every z in I, in lexicographic order, as a tuple."""
    codes = interfering_codes(p)
    for start in range(0, codes.shape[0], _CHUNK):
        for row in codes_to_vectors(codes[start:start + _CHUNK], p.q, p.n).tolist():
            yield tuple(row)


def induced_subproblem(p: BnsiProblem, keep: Iterable[int]) -> tuple[BnsiProblem, dict[int, int]]:
    """Restrict to the messages in ``keep``, renumbered 1..|keep| in order.

    Users left with nothing to demand are dropped. Returns the new problem
    and the old-to-new index map.
    """
    rho = sorted(set(keep))
    if not rho:
        raise EmptyKeepSet("keep set must be nonempty")
    bad = [j for j in rho if not 1 <= j <= p.n]
    if bad:
        raise InvalidProblem([f"keep: index {bad[0]} out of range [1, {p.n}]"])
    index_map = {old: new for new, old in enumerate(rho, start=1)}
    demands = []
    for x in p.demands:
        sub = tuple(index_map[j] for j in x if j in index_map)
        if sub:
            demands.append(sub)
    return BnsiProblem(p.field, len(rho), tuple(demands), p.delta_s), index_map


# text format: "key = <json value>" lines

_KEYS = {"q", "p", "k", "n", "m", "delta_s", "demands"}


def parse_kv(text: str, allowed: set[str]) -> tuple[dict, dict]:
    """Parse ``key = json`` lines. Returns values and the line of each key."""
    values, lines = {}, {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", no)
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in allowed:
            raise ParseError(f"unknown key {key!r}", no)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", no)
        try:
            values[key] = json.loads(val.strip())
        except json.JSONDecodeError as e:
            raise ParseError(f"bad value for {key!r}: {e.msg}", no) from None
        lines[key] = no
    return values, lines


def field_from_values(values: dict, lines: dict) -> FieldSpec:
    def need_int(key):
        v = values[key]
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError(f"{key} must be an integer, got {v!r}", lines[key])
        return v

    try:
        if "q" in values:
            if "p" in values or "k" in values:
                raise ParseError("give either q or p and k, not both", lines["q"])
            return FieldSpec.of(need_int("q"))
        if "p" in values:
            return FieldSpec(need_int("p"), need_int("k") if "k" in values else 1)
    except FieldError as e:
        key = "q" if "q" in values else "p"
        raise ParseError(str(e), lines[key]) from None
    return FieldSpec(2)


def load_problem(text: str) -> BnsiProblem:
    values, lines = parse_kv(text, _KEYS)
    fld = field_from_values(values, lines)
    for key in ("n", "delta_s", "demands"):
        if key not in values:
            raise ParseError(f"missing key {key!r}")
    demands = values["demands"]
    if not isinstance(demands, list) or not all(isinstance(x, list) for x in demands):
        raise ParseError("demands must be a list of lists", lines["demands"])
    if "m" in values and values["m"] != len(demands):
        raise ParseError(f"m = {values['m']} but {len(demands)} demand sets given", lines["m"])
    return BnsiProblem.create(values["n"], demands, values["delta_s"], fld)


def save_problem(p: BnsiProblem) -> str:
    demands = json.dumps([sorted(x) for x in p.demands])
    return "\n".join([f"q = {p.q}", f"n = {p.n}", f"delta_s = {p.delta_s}", f"demands = {demands}"]) + "\n"
