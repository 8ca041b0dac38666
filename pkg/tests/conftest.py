import numpy as np
import pytest
from hypothesis import strategies as st


@pytest.fixture
def rng():
    return np.random.default_rng(20160518)


def positive_targets(min_n=1, max_n=6):
    """Hypothesis strategy: strictly positive probability vectors."""
    return st.lists(
        st.floats(min_value=1e-3, max_value=1.0, allow_nan=False), min_size=min_n, max_size=max_n
    ).map(lambda xs: np.asarray(xs) / np.sum(xs))


TWO_HEAVY_TWO_LIGHT = (0.48, 0.48, 0.02, 0.02)
ROUND_DOWN_TARGET = (17 / 20, 3 / 40, 3 / 40)
ROUND_UP_TARGET = (0.719, 0.145, 0.088, 0.048)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion, then assert it."""

    def check(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))
        assert ok, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
