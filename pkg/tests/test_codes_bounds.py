import math
import random
from itertools import product

import numpy as np
import pytest

from bnsi.bounds import (
    block_diagonal,
    bounds_report,
    ecc_based_encoder,
    eta,
    lower_bound_bmax,
    lower_bound_size,
    partition_optimizer,
    saving,
    simple_scheme,
    upper_bound_disjoint,
    upper_bound_mds,
    upper_bound_mds_disjoint,
    upper_bound_partition,
)
from bnsi.codes import LinearCodeSpec, grs_parity_check, mds_parity_check, mds_realizable, min_distance
from bnsi.errors import DependentRows, DistanceTooSmall, FieldTooSmall, PreconditionViolated
from bnsi.gf import FieldSpec, FqMatrix
from bnsi.oracle import optimal_codelength_subspace
from bnsi.problem import BnsiProblem, induced_subproblem
from bnsi.structure import c_max, phi_emptiness
from bnsi.validity import is_valid_by_rank

from conftest import EX1_L, random_problem

ECC = [[1, 2, 3, 4], [2, 3, 4, 5], [1, 3, 4, 5, 6], [2, 3, 4, 5, 6]]
MDS10 = [[1, 3, 5, 7, 9], [2, 4, 6, 8, 10], [1, 2, 4, 6, 8, 10], [3, 4, 5, 6, 7, 9]]
DISJOINT = [[1, 2, 3, 9], [4, 5, 6, 10], [7, 8]]


def brute_distance(H: FqMatrix) -> int:
    f = H.field
    best = math.inf
    for x in product(range(f.q), repeat=H.cols):
        if any(x) and not (H @ FqMatrix([list(x)], f).T).array.any():
            best = min(best, sum(1 for v in x if v))
    return best


# codes


def test_min_distance_examples():
    f2 = FieldSpec(2)
    assert min_distance(LinearCodeSpec(FqMatrix([[1, 0, 1], [0, 1, 1]], f2))) == 3
    assert min_distance(grs_parity_check(FieldSpec(7), 6, 5)) == 5
    assert min_distance(LinearCodeSpec(FqMatrix.identity(3, f2))) == math.inf


def test_code_requires_independent_rows():
    with pytest.raises(DependentRows):
        LinearCodeSpec(FqMatrix([[1, 1], [1, 1]], FieldSpec(2)))


def test_grs_examples():
    c = grs_parity_check(FieldSpec(7), 6, 5)
    assert c.H.shape == (4, 6) and c.k == 2
    assert c.H.tolist()[1] == [0, 1, 2, 3, 4, 5]
    c16 = grs_parity_check(FieldSpec.of(16), 10, 8)
    assert c16.k == 3
    with pytest.raises(ValueError):
        grs_parity_check(FieldSpec(7), 6, 7)
    with pytest.raises(FieldTooSmall):
        grs_parity_check(FieldSpec(5), 7, 3)
    assert grs_parity_check(FieldSpec(5), 4, 1).H.rows == 0


def test_grs_is_mds():
    for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32):
        f = FieldSpec.of(q)
        for n in sorted({2, 3, min(q, 6), q} if q <= 6 else {3, 5, q}):
            for k in range(1, min(4, n) + 1):
                if q**k > 2**20:
                    continue
                c = grs_parity_check(f, n, n - k + 1)
                assert c.k == k
                assert min_distance(c) == n - k + 1


def test_doubly_extended_length():
    # length q + 1: needed for the [6, 2, 5] code over GF(5)
    c = mds_parity_check(FieldSpec(5), 6, 2)
    assert min_distance(c) == 5 == brute_distance(c.H)


def test_mds_parity_check_special_cases():
    f2 = FieldSpec(2)
    assert min_distance(mds_parity_check(f2, 6, 1)) == 6
    assert min_distance(mds_parity_check(f2, 6, 5)) == 2
    assert mds_parity_check(f2, 6, 6).H.rows == 0
    assert mds_parity_check(f2, 6, 0).H.rows == 6
    assert mds_realizable(2, 6, 1) and not mds_realizable(2, 6, 2)
    assert mds_realizable(5, 6, 2) and not mds_realizable(5, 7, 2)


def test_min_distance_matches_brute_force():
    rng = random.Random(8)
    for _ in range(40):
        f = FieldSpec.of(rng.choice([2, 3, 4]))
        n = rng.randint(2, 5)
        r = rng.randint(1, n - 1)
        H = FqMatrix([[rng.randrange(f.q) for _ in range(n)] for _ in range(r)], f)
        try:
            c = LinearCodeSpec(H)
        except DependentRows:
            continue
        assert min_distance(c) == brute_distance(H)


# constructions


def test_simple_scheme_examples(ex1):
    assert simple_scheme(ex1).tolist() == EX1_L
    with pytest.raises(PreconditionViolated):
        simple_scheme(BnsiProblem.create(1, [[1]], 1))
    rng = random.Random(4)
    done = 0
    while done < 30:
        p = random_problem(rng, rng.choice([2, 3]), rng.randint(3, 6), delta_s=1)
        if all(len(x) >= 3 for x in p.demands):
            assert is_valid_by_rank(p, simple_scheme(p, check=True))
            done += 1


def test_ecc_construction_examples():
    p2 = BnsiProblem.create(6, ECC, 1, 2)
    assert eta(p2) == 4
    L = ecc_based_encoder(p2, mds_parity_check(p2.field, 6, 1), check=True)
    assert L.cols == 5
    # the [6,1,5] alternative also works over GF(2)
    H5 = FqMatrix([[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 1], [0, 0, 1, 0, 0, 1],
                   [0, 0, 0, 1, 0, 1], [0, 0, 0, 0, 1, 0]], p2.field)
    assert min_distance(LinearCodeSpec(H5)) == 5
    assert ecc_based_encoder(p2, LinearCodeSpec(H5), check=True).cols == 5
    p5 = p2.with_field(5)
    assert ecc_based_encoder(p5, mds_parity_check(p5.field, 6, 2), check=True).cols == 4
    p16 = BnsiProblem.create(10, MDS10, 1, 16)
    code = grs_parity_check(p16.field, 10, 8)
    assert min_distance(code) == 8
    assert ecc_based_encoder(p16, code, check=True).cols == 7


def test_ecc_rejects_weak_code():
    p2 = BnsiProblem.create(6, ECC, 1, 2)
    with pytest.raises(DistanceTooSmall) as e:
        ecc_based_encoder(p2, mds_parity_check(p2.field, 6, 5))
    assert (e.value.required, e.value.actual) == (5, 2)


# bounds


def test_lower_bounds_example1(ex1):
    assert lower_bound_size(ex1).value == 2
    assert lower_bound_bmax(ex1).value == 3
    p0 = ex1.__class__.create(4, [[1, 2, 3]], 0)
    assert lower_bound_size(p0).value == 0


def test_lower_size_with_single_demand():
    p = BnsiProblem.create(5, [[2], [1, 3, 4, 5]], 1)
    b = lower_bound_size(p)
    assert b.value == 1 + min(2, 4)
    assert b.value <= optimal_codelength_subspace(p)[0]


def test_upper_bound_mds_examples():
    b = upper_bound_mds(BnsiProblem.create(10, MDS10, 1, 16))
    assert b.value == 7 and b.witness == 3
    small = upper_bound_mds(BnsiProblem.create(4, [[1, 2], [3]], 1, 5))
    assert small.value == 4 and small.matrix.tolist() == np.eye(4, dtype=int).tolist()
    assert not upper_bound_mds(BnsiProblem.create(6, ECC, 1, 2)).available


def test_upper_bound_disjoint_examples():
    p = BnsiProblem.create(10, DISJOINT, 1, 2)
    b = upper_bound_disjoint(p)
    assert b.value == 8 and is_valid_by_rank(p, b.matrix)
    empty = BnsiProblem.create(5, [[1, 2, 3, 4], [4, 5], [1, 3, 5], [1, 2, 4]], 1)
    b = upper_bound_disjoint(empty)
    assert b.value == 5 and b.matrix.tolist() == np.eye(5, dtype=int).tolist()


def test_upper_bound_mds_disjoint_examples():
    p = BnsiProblem.create(10, DISJOINT, 1, 2)
    assert not upper_bound_mds_disjoint(p).available
    for q in (4, 5, 7, 8):
        pq = p.with_field(q)
        b = upper_bound_mds_disjoint(pq)
        assert b.value == 6 and is_valid_by_rank(pq, b.matrix)
    assert saving(p, {1, 2, 3, 9}) == 2 and saving(p, {7}) == 0 and saving(p, set()) == 0


def test_partition_examples(ex1):
    r = partition_optimizer(ex1)
    assert r.partition == (frozenset({1, 2, 3, 4}),) and r.D_sum == 1
    p = BnsiProblem.create(10, DISJOINT, 1, 4)
    r = partition_optimizer(p)
    assert r.D_sum == 4 and r.d_sum_ideal == 4
    assert is_valid_by_rank(p, r.matrix) and r.matrix.cols == 6
    assert partition_optimizer(BnsiProblem.create(2, [[1, 2]], 1)) is None


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def test_partition_optimum_matches_independent_enumeration():
    rng = random.Random(12)
    checked = 0
    while checked < 60:
        q = rng.choice([2, 3, 4, 5])
        p = random_problem(rng, q, rng.randint(2, 8), delta_s=rng.choice([1, 1, 2]))
        C = c_max(p)
        if C is None:
            continue
        best = 0
        for part in _set_partitions(sorted(C)):
            total = 0
            for block in part:
                d = saving(p, block)
                total += d if mds_realizable(q, len(block), d) else min(d, 1)
            best = max(best, total)
        r = partition_optimizer(p)
        assert r.D_sum == best
        assert is_valid_by_rank(p, r.matrix) and r.matrix.cols == p.n - best
        checked += 1


def test_partition_greedy_mode_is_valid():
    rng = random.Random(13)
    for _ in range(30):
        q = rng.choice([2, 4])
        p = random_problem(rng, q, rng.randint(3, 9), delta_s=1)
        g = partition_optimizer(p, mode="greedy")
        e = partition_optimizer(p, mode="exact")
        if g is None:
            assert e is None
            continue
        assert g.D_sum <= e.D_sum
        assert is_valid_by_rank(p, g.matrix)


def test_block_diagonal_layout(ex1):
    L = block_diagonal(ex1, [((1, 3), FqMatrix([[1], [1]], ex1.field))])
    assert L.tolist() == [[1, 0, 0], [0, 1, 0], [1, 0, 0], [0, 0, 1]]


def test_bounds_report_example1(ex1):
    r = bounds_report(ex1)
    assert r.lower_bmax == 3 and r.upper_disjoint == 3
    assert r.best_lower == r.best_upper == r.oracle == 3
    assert r.violations == ()
    d = r.as_dict()
    assert d["lower_bmax"]["witness"] == [1, 2, 3]


def test_bounds_report_delta_zero():
    p = BnsiProblem.create(4, [[1, 2], [3]], 0)
    r = bounds_report(p)
    assert r.lower_size == 0 and r.lower_bmax == 0 and r.oracle == 0
    assert r.best_upper == 0
    assert r.violations == ()


def test_bounds_report_sandwich_random():
    rng = random.Random(21)
    for _ in range(100):
        n = rng.randint(1, 6)
        p = random_problem(rng, 2, n)
        r = bounds_report(p)
        assert r.oracle is not None
        assert r.violations == ()
        assert r.lower_size <= r.lower_bmax <= r.oracle
        if r.upper_mds_disjoint is not None:
            assert r.upper_mds_disjoint <= r.upper_disjoint
        assert (r.oracle == p.n) == phi_emptiness(p).is_empty


def test_monotone_under_induced_subproblems():
    rng = random.Random(22)
    for _ in range(60):
        q = rng.choice([2, 3])
        n = rng.randint(2, 6 if q == 2 else 4)
        p = random_problem(rng, q, n)
        rho = rng.sample(range(1, n + 1), rng.randint(1, n))
        sub, _ = induced_subproblem(p, rho)
        assert optimal_codelength_subspace(sub)[0] <= optimal_codelength_subspace(p)[0]
