"""Acceptance criteria. Each test is named test_criterion_<number>_<check>;
the terminal summary prints one PASS/FAIL line per criterion number."""
import random
import time
from itertools import combinations, combinations_with_replacement

import numpy as np

from bnsi.bounds import (
    bounds_report,
    ecc_based_encoder,
    lower_bound_bmax,
    lower_bound_size,
    partition_optimizer,
    upper_bound_disjoint,
    upper_bound_mds,
    upper_bound_mds_disjoint,
)
from bnsi.codes import LinearCodeSpec, grs_parity_check, mds_parity_check, min_distance
from bnsi.decoder import build_decoder, decode, decode_batch, encode_batch, error_patterns
from bnsi.gf import FqMatrix, codes_to_vectors
from bnsi.index_coding import ic_interfering_codes, ic_is_valid, reduce_to_ic
from bnsi.oracle import SUBSPACE_GUARD, optimal_codelength_exhaustive, optimal_codelength_subspace, subspace_count
from bnsi.problem import BnsiProblem, interfering_codes
from bnsi.structure import phi_contains, phi_emptiness
from bnsi.validity import is_valid_by_enumeration, is_valid_by_rank

from conftest import EX1_L, EX1_DEMANDS, random_matrix, random_problem

ECC = [[1, 2, 3, 4], [2, 3, 4, 5], [1, 3, 4, 5, 6], [2, 3, 4, 5, 6]]
MDS10 = [[1, 3, 5, 7, 9], [2, 4, 6, 8, 10], [1, 2, 4, 6, 8, 10], [3, 4, 5, 6, 7, 9]]
DISJOINT = [[1, 2, 3, 9], [4, 5, 6, 10], [7, 8]]
N7 = [[1, 3, 5], [2, 4, 6], [3, 6, 7], [4, 5, 6]]
PHI_EMPTY = [[1, 2, 3, 4], [4, 5], [1, 3, 5], [1, 2, 4]]


def _feasible_n(q: int, limit_bits: int) -> int:
    n = 1
    while q ** (n + 1) <= 2**limit_bits:
        n += 1
    return n


# 1: optimum of the running example


def test_criterion_1_example_optimum():
    t0 = time.perf_counter()
    p = BnsiProblem.create(4, EX1_DEMANDS, 1, 2)
    N, L = optimal_codelength_subspace(p)
    assert N == 3 and is_valid_by_rank(p, L)
    assert is_valid_by_rank(p, FqMatrix(EX1_L, p.field))
    assert is_valid_by_enumeration(p, FqMatrix(EX1_L, p.field))
    assert optimal_codelength_exhaustive(p, 2) is None
    assert time.perf_counter() - t0 < 1.0


# 2: syndrome decoding fixture


def test_criterion_2_syndrome_decoding():
    p = BnsiProblem.create(4, EX1_DEMANDS, 1, 2)
    d = build_decoder(p, FqMatrix(EX1_L, p.field), 1)
    assert d.H.tolist() == [[1, 0, 1], [0, 1, 1]]
    by_error = {e: s for s, e in d.table.items()}
    assert by_error == {(0, 0, 0): (0, 0), (0, 0, 1): (1, 1), (0, 1, 0): (0, 1), (1, 0, 0): (1, 0)}
    assert decode(d, (0, 1, 1), (1, 0, 1)) == (1, 0, 0)


# 3: coding helps exactly when Phi is nonempty


def test_criterion_3_phi_equivalence():
    t0 = time.perf_counter()
    mismatches = checked = 0
    for n in range(1, 5):
        subsets = [s for r in range(1, n + 1) for s in combinations(range(1, n + 1), r)]
        for m in range(1, 4):
            for family in combinations_with_replacement(subsets, m):
                p = BnsiProblem.create(n, [list(s) for s in family], 1, 2)
                N = optimal_codelength_subspace(p)[0]
                mismatches += (N == n) != phi_emptiness(p).is_empty
                checked += 1
    assert checked == 956
    assert mismatches == 0
    assert time.perf_counter() - t0 < 300


# 4: worked examples, each check separately


def test_criterion_4_phi_witness():
    p = BnsiProblem.create(4, EX1_DEMANDS, 1, 2)
    r = phi_emptiness(p)
    assert not r.is_empty and r.witness == frozenset({1, 2, 3, 4})
    assert phi_contains(p, {1, 2, 3, 4})


def test_criterion_4_phi_empty_instance():
    p = BnsiProblem.create(5, PHI_EMPTY, 1, 2)
    assert phi_emptiness(p).is_empty
    assert optimal_codelength_subspace(p)[0] == 5


def test_criterion_4_lower_bounds():
    p = BnsiProblem.create(4, EX1_DEMANDS, 1, 2)
    assert lower_bound_size(p).value == 2
    assert lower_bound_bmax(p).value == 3


def test_criterion_4_ecc_constructions():
    p2 = BnsiProblem.create(6, ECC, 1, 2)
    L2 = ecc_based_encoder(p2, mds_parity_check(p2.field, 6, 1), check=True)
    assert L2.cols == 5
    p5 = p2.with_field(5)
    L5 = ecc_based_encoder(p5, mds_parity_check(p5.field, 6, 2), check=True)
    assert L5.cols == 4


def test_criterion_4_mds_example():
    p = BnsiProblem.create(10, MDS10, 1, 16)
    code = grs_parity_check(p.field, 10, 8)
    assert code.k == 3 and min_distance(code) == 8
    assert ecc_based_encoder(p, code, check=True).cols == 7
    assert upper_bound_mds(p).value == 7


def test_criterion_4_disjoint_bounds():
    p = BnsiProblem.create(10, DISJOINT, 1, 2)
    b = upper_bound_disjoint(p)
    assert b.value == 8 and is_valid_by_rank(p, b.matrix)
    for q in (4, 5, 7, 8, 9, 16):
        pq = p.with_field(q)
        b = upper_bound_mds_disjoint(pq)
        assert b.value == 6 and is_valid_by_rank(pq, b.matrix)
        assert partition_optimizer(pq).matrix.cols == 6


def test_criterion_4_n7_equality():
    # Expected from the worked example: a disjoint collection of two Phi
    # elements and N_opt = 5. {1,3,5} is not in Phi here (users 3 and 4
    # meet it in one index each), and the oracle finds N_opt = 6.
    p = BnsiProblem.create(7, N7, 1, 2)
    N, L = optimal_codelength_subspace(p)
    assert is_valid_by_rank(p, L)
    assert upper_bound_disjoint(p).value == 5
    assert N == 5


def test_criterion_4_reduction_counts():
    ic = reduce_to_ic(BnsiProblem.create(4, EX1_DEMANDS, 1, 2))
    assert ic.m_hat_formula == 18 and ic.m_distinct == 12


# 5: the two validity routes agree


def test_criterion_5_validity_routes_agree():
    t0 = time.perf_counter()
    rng = random.Random(20260501)
    mismatches = 0
    for _ in range(10_000):
        q = rng.choice([2, 3, 4])
        n = rng.randint(1, 6)
        p = random_problem(rng, q, n)
        L = FqMatrix(random_matrix(rng, q, n, rng.randint(0, n)), p.field)
        mismatches += is_valid_by_enumeration(p, L).valid != is_valid_by_rank(p, L).valid
    assert mismatches == 0
    assert time.perf_counter() - t0 < 120


# 6: every bounded error decodes


def _random_valid_encoder(rng, p):
    for _ in range(50):
        N = rng.randint(1, p.n)
        L = FqMatrix(random_matrix(rng, p.q, p.n, N), p.field)
        if is_valid_by_rank(p, L):
            return L
    return optimal_codelength_subspace(p)[1]


def test_criterion_6_exhaustive_decoding():
    rng = random.Random(20260502)
    failures = encoders = 0
    while encoders < 50:
        q = rng.choice([2, 3, 4, 5, 7, 8, 16])
        n = rng.randint(1, _feasible_n(q, 12))
        p = random_problem(rng, q, n, delta_s=rng.choice([1, 1, 2]))
        L = _random_valid_encoder(rng, p)
        if L.cols == 0:
            continue
        encoders += 1
        xs = codes_to_vectors(np.arange(q**n, dtype=np.int64), q, n)
        C = encode_batch(p, L, xs)
        for i, X in enumerate(p.x0, start=1):
            d = build_decoder(p, L, i, fallback=True)
            truth = xs[:, list(X)]
            for eps in error_patterns(len(X), p.delta_s, q):
                out, ok = decode_batch(d, C, p.field.add(truth, np.array(eps, dtype=np.int64)))
                failures += int((~(ok & (out == truth).all(axis=1))).sum())
    assert failures == 0


# 7: the index-coding reduction preserves the interfering set


def test_criterion_7_reduction_equivalence():
    rng = random.Random(20260503)
    set_mismatch = valid_mismatch = 0
    for _ in range(200):
        q = rng.choice([2, 3, 4, 5, 7])
        n = rng.randint(1, _feasible_n(q, 14))
        p = random_problem(rng, q, n)
        ic = reduce_to_ic(p)
        set_mismatch += not np.array_equal(interfering_codes(p), ic_interfering_codes(ic, p.field))
        for _ in range(20):
            L = FqMatrix(random_matrix(rng, q, n, rng.randint(0, n)), p.field)
            valid_mismatch += ic_is_valid(ic, L).valid != is_valid_by_rank(p, L).valid
    assert set_mismatch == 0 and valid_mismatch == 0


# 8: bounds sandwich the optimum


def test_criterion_8_sandwich():
    rng = random.Random(20260504)
    violations = []
    done = 0
    while done < 100:
        q = rng.choice([2, 2, 3, 4, 5])
        n = rng.randint(1, 7)
        if subspace_count(q, n) > SUBSPACE_GUARD // 16:
            continue
        p = random_problem(rng, q, n)
        r = bounds_report(p)
        violations += list(r.violations)
        N = r.oracle
        for name in r.LOWER:
            v = r.bounds[name].value
            if v is not None and v > N:
                violations.append(f"{name}={v} > N_opt={N} for {p}")
        for name in r.UPPER:
            b = r.bounds[name]
            if b.value is None:
                continue
            if b.value < N:
                violations.append(f"{name}={b.value} < N_opt={N} for {p}")
            if b.matrix is not None and not is_valid_by_enumeration(p, b.matrix):
                violations.append(f"{name} matrix invalid for {p}")
        done += 1
    assert violations == []
