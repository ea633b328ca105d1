from __future__ import annotations

import numpy as np
import pytest

from polarcart.gf import field_new

# F_4 with x^2 + x + 1: index 2 is a, index 3 is a^2
_F4_NAMES = {"0": 0, "1": 1, "a": 2, "a2": 3}


def f4_matrix(text: str) -> np.ndarray:
    rows = [r.split() for r in text.strip().splitlines()]
    return np.array([[_F4_NAMES[e] for e in r] for r in rows], dtype=np.int64)


@pytest.fixture(scope="session")
def F2():
    return field_new(2)


@pytest.fixture(scope="session")
def F4():
    return field_new(2, 2)


@pytest.fixture(scope="session")
def F5():
    return field_new(5)


@pytest.fixture(scope="session")
def F7():
    return field_new(7)


@pytest.fixture(scope="session")
def GA():
    return np.array([[1, 0], [1, 1]], dtype=np.int64)


F4_SUBSETS = [[0, 1, 2], [0, 1, 2, 3]]

T1_TEXT = """
0 1 a2
0 1 a
1 1 1
"""

T2_TEXT = """
0 1 1 1
0 1 a2 a
0 1 a a2
1 1 1 1
"""

KRON_TEXT = """
0 0 0 0 0 1 1 1 0 a2 a2 a2
0 0 0 0 0 1 a2 a 0 a2 a 1
0 0 0 0 0 1 a a2 0 a2 1 a
0 0 0 0 1 1 1 1 a2 a2 a2 a2
0 0 0 0 0 1 1 1 0 a a a
0 0 0 0 0 1 a2 a 0 a 1 a2
0 0 0 0 0 1 a a2 0 a a2 1
0 0 0 0 1 1 1 1 a a a a
0 1 1 1 0 1 1 1 0 1 1 1
0 1 a2 a 0 1 a2 a 0 1 a2 a
0 1 a a2 0 1 a a2 0 1 a a2
1 1 1 1 1 1 1 1 1 1 1 1
"""

REVERSAL_TEXT = """
1 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 1 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 1 0 0 0
0 1 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 1 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 1 0 0
0 0 1 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 1 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 1 0
0 0 0 1 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 1 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 1
"""

G2_TEXT = """
0 0 0 0 0 1 1 1 0 a2 a2 a2
0 0 0 0 0 1 1 1 0 a a a
0 1 1 1 0 1 1 1 0 1 1 1
0 0 0 0 0 1 a2 a 0 a2 a 1
0 0 0 0 0 1 a2 a 0 a 1 a2
0 1 a2 a 0 1 a2 a 0 1 a2 a
0 0 0 0 0 1 a a2 0 a2 1 a
0 0 0 0 0 1 a a2 0 a a2 1
0 1 a a2 0 1 a a2 0 1 a a2
0 0 0 0 1 1 1 1 a2 a2 a2 a2
0 0 0 0 1 1 1 1 a a a a
1 1 1 1 1 1 1 1 1 1 1 1
"""


def random_decreasing(rng: np.random.Generator, bounds, n_gens: int | None = None):
    """Random generators inside ``bounds``."""
    k = n_gens if n_gens is not None else int(rng.integers(1, 4))
    return [tuple(int(rng.integers(0, b)) for b in bounds) for _ in range(k)]


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
