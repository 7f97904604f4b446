import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from sbmrobust.blockmodel import KAPPA_FLOOR, BlockModel


def random_model(rng, B=None, kmax=10.0):
    """Valid model with B <= 3 blocks and block mean degrees <= kmax."""
    B = B or int(rng.integers(1, 4))
    while True:
        n = rng.dirichlet(np.ones(B))
        k = rng.uniform(1.3, kmax, size=B)
        ends = n * k
        # Sinkhorn-style symmetric matrix with prescribed row sums
        e = rng.random((B, B))
        e = e + e.T
        for _ in range(500):
            s = np.sqrt(ends / e.sum(axis=1))
            e = e * s[:, None] * s[None, :]
        e = 0.5 * (e + e.T)
        m = BlockModel(n / n.sum(), e)
        if np.all(m.block_degrees >= KAPPA_FLOOR) and np.all(m.block_degrees <= kmax * 1.01):
            return m


@st.composite
def models(draw, max_B=4):
    B = draw(st.integers(1, max_B))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_model(np.random.default_rng(seed), B)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


settings.register_profile("sbm", deadline=None, max_examples=60)
settings.load_profile("sbm")


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
