import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bnsi.errors import EmptyKeepSet, InvalidProblem, ParseError, TooLarge
from bnsi.gf import FieldSpec
from bnsi.problem import (
    BnsiProblem,
    bipartite,
    induced_subproblem,
    interfering_codes,
    interfering_set,
    lint_problem,
    load_problem,
    save_problem,
    validate_problem,
)

from conftest import EX1_DEMANDS, random_problem


def brute_interfering(p):
    out = []
    for z in product(range(p.q), repeat=p.n):
        for x in p.demands:
            w = sum(1 for j in x if z[j - 1])
            if 1 <= w <= p.two_delta:
                out.append(z)
                break
    return out


def test_example1_is_valid(ex1):
    assert validate_problem(ex1) == []
    assert (ex1.m, ex1.n, ex1.delta_s, ex1.q) == (3, 4, 1, 2)
    assert ex1.Y(1) == (4,) and ex1.Y(2) == (1,) and ex1.Y(3) == (2,)


def test_validation_errors_have_paths():
    with pytest.raises(InvalidProblem) as e:
        BnsiProblem.create(4, [[1, 2], []], 1)
    assert e.value.errors == ["demands[2]: empty demand set"]
    with pytest.raises(InvalidProblem) as e:
        BnsiProblem.create(4, [[1, 5]], 1)
    assert "out of range" in e.value.errors[0] and e.value.errors[0].startswith("demands[1]")
    with pytest.raises(InvalidProblem) as e:
        BnsiProblem.create(4, [[1, 1]], -1)
    assert len(e.value.errors) == 2


def test_create_sorts_demands():
    p = BnsiProblem.create(4, [[3, 1, 2]], 1)
    assert p.demands == ((1, 2, 3),)


def test_lint_flags_duplicates_and_undemanded():
    p = BnsiProblem.create(5, [[1, 2], [2, 1]], 1)
    w = lint_problem(p)
    assert any("demanded by no user" in s for s in w)
    assert any("repeats" in s for s in w)


def test_bipartite_view(ex1):
    g = bipartite(ex1)
    assert len(g.edges) == sum(len(x) for x in ex1.demands)
    assert all(g.degree(i) == len(ex1.X(i)) for i in g.users)
    assert g.packet_adj[4] == frozenset({2, 3})


def test_interfering_set_examples(ex1):
    I = list(interfering_set(ex1))
    assert len(I) == 14
    assert (0, 0, 0, 0) not in I and (1, 1, 1, 1) not in I
    assert I == sorted(I)
    p0 = BnsiProblem.create(4, EX1_DEMANDS, 0)
    assert list(interfering_set(p0)) == []
    small = BnsiProblem.create(2, [[1, 2]], 1)
    assert list(interfering_set(small)) == [(0, 1), (1, 0), (1, 1)]


def test_interfering_set_guard():
    with pytest.raises(TooLarge):
        interfering_codes(BnsiProblem.create(29, [[1]], 1))


def test_interfering_set_matches_brute_force():
    rng = random.Random(11)
    for _ in range(40):
        q = rng.choice([2, 3, 4])
        n = rng.randint(1, 5 if q == 2 else 4)
        p = random_problem(rng, q, n)
        assert list(interfering_set(p)) == brute_interfering(p)


@given(st.integers(0, 10**6))
def test_interfering_set_negation_symmetric(seed):
    rng = random.Random(seed)
    q = rng.choice([3, 4, 5])
    p = random_problem(rng, q, rng.randint(1, 4))
    I = set(interfering_set(p))
    f = p.field
    assert all(tuple(int(v) for v in f.neg(np.array(z))) in I for z in I)


def test_induced_subproblem_examples(ex1):
    sub, mp = induced_subproblem(ex1, {2, 3, 4})
    assert mp == {2: 1, 3: 2, 4: 3}
    assert sub.demands == ((1, 2), (1, 2, 3), (2, 3))
    same, ident = induced_subproblem(ex1, range(1, 5))
    assert same == ex1 and ident == {j: j for j in range(1, 5)}
    drop, _ = induced_subproblem(ex1, ex1.Y(1))
    assert drop.m == 2
    with pytest.raises(EmptyKeepSet):
        induced_subproblem(ex1, [])


@given(st.integers(0, 10**6))
def test_induced_subproblem_composes(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    p = random_problem(rng, 2, n)
    rho = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
    rho2 = sorted(rng.sample(rho, rng.randint(1, len(rho))))
    a, mp = induced_subproblem(p, rho)
    twice, _ = induced_subproblem(a, [mp[j] for j in rho2])
    once, _ = induced_subproblem(p, rho2)
    assert twice == once


def test_problem_text_roundtrip():
    for name in ("example1", "ecc-example", "mds-example", "disjoint-example",
                 "n7-example", "phi-empty-fixture"):
        from importlib import resources

        text = (resources.files("bnsi") / "fixtures" / f"{name}.txt").read_text()
        p = load_problem(text)
        assert load_problem(save_problem(p)) == p


def test_load_example1_fixture(ex1):
    from importlib import resources

    text = (resources.files("bnsi") / "fixtures" / "example1.txt").read_text()
    assert load_problem(text) == ex1


def test_load_extension_field_and_m_check():
    p = load_problem("p = 2\nk = 4\nn = 3\nm = 1\ndelta_s = 1\ndemands = [[3, 1]]\n")
    assert p.field == FieldSpec(2, 4) and p.demands == ((1, 3),)


@pytest.mark.parametrize("text,line", [
    ("q = 6\nn = 2\ndelta_s = 1\ndemands = [[1]]\n", 1),
    ("q = 2\nn = 2\ndelta_s = 1\ndemands = [[1]\n", 4),
    ("q = 2\nn = 2\nbogus = 1\n", 3),
    ("q = 2\nn = 2\nm = 3\ndelta_s = 1\ndemands = [[1]]\n", 3),
    ("q = 2\nn 2\n", 2),
    ('q = "two"\nn = 2\ndelta_s = 1\ndemands = [[1]]\n', 1),
])
def test_parse_errors_report_lines(text, line):
    with pytest.raises(ParseError) as e:
        load_problem(text)
    assert e.value.line == line


def test_load_rejects_invalid_demands():
    with pytest.raises(InvalidProblem):
        load_problem("q = 2\nn = 2\ndelta_s = 1\ndemands = [[1], []]\n")
