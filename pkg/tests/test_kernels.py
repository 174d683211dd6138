"""The compiled kernels and the numpy fallback must agree exactly."""
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bnsi import _kernels_py as py
from bnsi.gf import FieldSpec

cy = pytest.importorskip("bnsi._kernels")

QS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 256]


def rand_array(rng, q, r, c):
    return np.array([[rng.randrange(q) for _ in range(c)] for _ in range(r)], dtype=np.int64).reshape(r, c)


@given(st.integers(0, 2**32), st.sampled_from(QS))
def test_rref_parity(seed, q):
    rng = random.Random(seed)
    f = FieldSpec.of(q)
    a = rand_array(rng, q, rng.randint(0, 6), rng.randint(0, 7))
    b = a.copy()
    pa = py.rref(a, *f.kernel_args())
    pb = cy.rref(b, *f.kernel_args())
    assert list(pa) == list(pb)
    assert np.array_equal(a, b)


@given(st.integers(0, 2**32), st.sampled_from(QS))
def test_matmul_parity(seed, q):
    rng = random.Random(seed)
    f = FieldSpec.of(q)
    m, n, k = rng.randint(0, 5), rng.randint(0, 5), rng.randint(0, 5)
    a, b = rand_array(rng, q, m, n), rand_array(rng, q, n, k)
    assert np.array_equal(py.matmul(a, b, *f.kernel_args()), np.asarray(cy.matmul(a, b, *f.kernel_args())))


@given(st.integers(0, 2**32), st.sampled_from([2, 3, 4, 5]))
def test_first_zero_product_parity(seed, q):
    rng = random.Random(seed)
    f = FieldSpec.of(q)
    n = rng.randint(1, 5)
    z = rand_array(rng, q, rng.randint(0, 30), n)
    L = rand_array(rng, q, n, rng.randint(1, 3))
    assert py.first_zero_product(z, L, *f.kernel_args()) == cy.first_zero_product(z, L, *f.kernel_args())


@given(st.integers(0, 2**32), st.sampled_from([2, 3, 4, 5]))
def test_span_extend_parity(seed, q):
    rng = random.Random(seed)
    f = FieldSpec.of(q)
    n = rng.randint(1, 4)
    allowed = np.array([rng.random() < 0.8 for _ in range(q**n)], dtype=np.uint8)
    allowed[0] = 1
    span = np.zeros(1, dtype=np.int64)
    for _ in range(rng.randint(1, 3)):
        v = np.array([rng.randrange(q) for _ in range(n)], dtype=np.int64)
        a = py.span_extend(span, v, *f.kernel_args(), allowed)
        b = cy.span_extend(span, v, *f.kernel_args(), allowed)
        if a is None or b is None:
            assert a is None and b is None
            return
        assert np.array_equal(a, np.asarray(b))
        span = a


@given(st.integers(0, 2**32))
def test_phi_kernels_parity(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 10)
    masks = np.array([rng.randrange(1, 2**n) for _ in range(rng.randint(1, 5))], dtype=np.int64)
    two_delta = rng.choice([0, 2, 4])
    P = rng.randrange(2**n)
    assert py.phi_peel(masks, P, two_delta) == cy.phi_peel(masks, P, two_delta)
    assert py.bmax_search(masks, n, two_delta) == cy.bmax_search(masks, n, two_delta)


@given(st.integers(0, 2**32), st.integers(0, 8))
def test_best_partition_parity(seed, s):
    rng = random.Random(seed)
    values = np.array([0] + [rng.randrange(5) for _ in range(2**s - 1)], dtype=np.int64)
    a, b = py.best_partition(values, s), cy.best_partition(values, s)
    assert a[0] == b[0]
    assert list(a[1]) == list(b[1])
