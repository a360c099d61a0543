import numpy as np
import pytest
from hypothesis import strategies as st

from ocf_bands.objectives import IntervalScoreTable


def random_similarity(rng, n):
    """Symmetric, strictly positive, unit-diagonal matrix."""
    a = rng.uniform(0.01, 1.0, (n, n))
    w = np.triu(a, 1)
    w = w + w.T
    np.fill_diagonal(w, 1.0)
    return w


def random_table(rng, n, combiner="sum", direction="maximize"):
    scores = np.triu(rng.normal(size=(n, n)))
    return IntervalScoreTable(scores, combiner, direction)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


ACCEPTANCE_LINES = []


def report(criterion, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
