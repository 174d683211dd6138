import random

import numpy as np
import pytest
from hypothesis import settings

from bnsi.problem import BnsiProblem

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

EX1_DEMANDS = [[1, 2, 3], [2, 3, 4], [1, 3, 4]]
EX1_L = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]


@pytest.fixture
def ex1():
    return BnsiProblem.create(4, EX1_DEMANDS, 1, 2)


@pytest.fixture
def ex1_L():
    return np.array(EX1_L, dtype=np.int64)


def random_problem(rng: random.Random, q: int, n: int, m: int | None = None,
                   delta_s: int | None = None) -> BnsiProblem:
    if m is None:
        m = rng.randint(1, 4)
    if delta_s is None:
        delta_s = rng.choice([0, 1, 1, 1, 2])
    demands = []
    for _ in range(m):
        size = rng.randint(1, n)
        demands.append(sorted(rng.sample(range(1, n + 1), size)))
    return BnsiProblem.create(n, demands, delta_s, q)


def random_matrix(rng: random.Random, q: int, n: int, N: int) -> np.ndarray:
    return np.array([[rng.randrange(q) for _ in range(N)] for _ in range(n)], dtype=np.int64).reshape(n, N)


# acceptance summary: one line per criterion

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    key = name[len("test_criterion_"):]
    _ACCEPTANCE[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    groups = {}
    for key, outcome in _ACCEPTANCE.items():
        groups.setdefault(int(key.split("_")[0]), []).append((key, outcome))
    terminalreporter.section("acceptance criteria")
    for num in sorted(groups):
        failed = sorted(k for k, o in groups[num] if o != "passed")
        line = f"criterion {num}: {'FAIL' if failed else 'PASS'}"
        if failed:
            line += f" (failing checks: {', '.join(failed)})"
        terminalreporter.write_line(line)
