import random
from itertools import product

import numpy as np
import pytest

from bnsi.errors import TooLarge
from bnsi.gf import FieldSpec, FqMatrix, codes_to_vectors, matmul_arrays
from bnsi.oracle import optimal_codelength_exhaustive, optimal_codelength_subspace, subspace_count
from bnsi.problem import BnsiProblem, interfering_mask
from bnsi.structure import phi_emptiness
from bnsi.validity import is_valid_by_enumeration, is_valid_by_rank

from conftest import EX1_DEMANDS, random_matrix, random_problem


def test_subspace_count_small_values():
    assert subspace_count(2, 1) == 2
    assert subspace_count(2, 2) == 5
    assert subspace_count(2, 3) == 16
    assert subspace_count(3, 2) == 6


def test_subspace_count_by_enumeration():
    # count distinct row spaces of all k x n matrices
    for q, n in ((2, 3), (3, 2), (2, 4)):
        f = FieldSpec(q)
        spaces = set()
        for k in range(n + 1):
            for entries in product(range(q), repeat=k * n):
                M = np.array(entries, dtype=np.int64).reshape(k, n)
                if k == 0:
                    spaces.add(frozenset({(0,) * n}))
                    continue
                span = {tuple(int(v) for v in matmul_arrays(np.array([c]), M, f)[0])
                        for c in product(range(q), repeat=k)}
                spaces.add(frozenset(span))
        assert subspace_count(q, n) == len(spaces)


def test_example1_optimum(ex1):
    N, L = optimal_codelength_subspace(ex1)
    assert N == 3 and is_valid_by_rank(ex1, L)
    assert optimal_codelength_exhaustive(ex1, 3) == 3
    assert optimal_codelength_exhaustive(ex1, 2) is None


def test_phi_empty_example_needs_n():
    p = BnsiProblem.create(5, [[1, 2, 3, 4], [4, 5], [1, 3, 5], [1, 2, 4]], 1)
    assert optimal_codelength_subspace(p)[0] == 5


def test_n7_example_optimum():
    # Phi holds only the full index set, so one transmission is saved
    p = BnsiProblem.create(7, [[1, 3, 5], [2, 4, 6], [3, 6, 7], [4, 5, 6]], 1)
    N, L = optimal_codelength_subspace(p)
    assert N == 6 and is_valid_by_rank(p, L)


def test_delta_zero_needs_nothing():
    p = BnsiProblem.create(3, [[1, 2], [3]], 0)
    assert optimal_codelength_exhaustive(p, 2) == 0
    N, L = optimal_codelength_subspace(p)
    assert N == 0 and L.shape == (3, 0)


def test_oracles_agree():
    rng = random.Random(31)
    for _ in range(150):
        q = rng.choice([2, 2, 3])
        n = rng.randint(1, 4 if q == 2 else 3)
        p = random_problem(rng, q, n)
        N, L = optimal_codelength_subspace(p)
        assert is_valid_by_enumeration(p, L)
        assert optimal_codelength_exhaustive(p, N) == N
        if N:
            assert optimal_codelength_exhaustive(p, N - 1) is None


def test_optimal_encoder_reproducible(ex1):
    a = optimal_codelength_subspace(ex1)[1]
    b = optimal_codelength_subspace(BnsiProblem.create(4, EX1_DEMANDS, 1))[1]
    assert a.tolist() == b.tolist()


def test_validity_is_kernel_avoidance():
    # L is valid exactly when no z in I has zL = 0
    rng = random.Random(32)
    for _ in range(300):
        q = rng.choice([2, 3])
        n = rng.randint(1, 5 if q == 2 else 4)
        p = random_problem(rng, q, n)
        f = p.field
        L = random_matrix(rng, q, n, rng.randint(0, n))
        zs = codes_to_vectors(np.arange(q**n, dtype=np.int64), q, n)
        if L.shape[1]:
            kernel = ~(matmul_arrays(zs, L, f) != 0).any(axis=1)
        else:
            kernel = np.ones(q**n, dtype=bool)
        expect = not (kernel & interfering_mask(p)).any()
        assert is_valid_by_rank(p, FqMatrix(L, f)).valid == expect


def test_full_length_iff_phi_empty():
    rng = random.Random(33)
    for _ in range(200):
        p = random_problem(rng, 2, rng.randint(1, 6))
        N = optimal_codelength_subspace(p)[0]
        assert (N == p.n) == phi_emptiness(p).is_empty or p.delta_s == 0


def test_guards():
    big = BnsiProblem.create(9, [[1, 2, 3]], 1, 3)
    with pytest.raises(TooLarge):
        optimal_codelength_subspace(big)
    p = BnsiProblem.create(6, [[1, 2, 3, 4, 5, 6]], 1)
    with pytest.raises(TooLarge):
        optimal_codelength_exhaustive(p, 5)
