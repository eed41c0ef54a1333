import numpy as np
import pytest

from app.models.experiment import SynthSpec
from app.services.synthetic import gen_synthetic
from app.services.tproduct import tprod


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow Monte-Carlo checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo check, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def stack(*slices):
    """Build an m x n x p tensor from its frontal slices."""
    return np.stack([np.asarray(s, dtype=float) for s in slices], axis=2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def example_one():
    """3x3x2 co-(2,2)-separable tensor with its printed factors (free parameters set to zero)."""
    a = stack([[1, 2, 7], [3, 4, 11], [8, 10, 18]], [[5, 6, 7], [7, 8, 11], [8, 10, 18]])
    p1 = stack([[1, 0], [0, 1], [1, 0]], [[0, 0], [0, 0], [0, 1]])
    core = stack([[1, 2], [3, 4]], [[5, 6], [7, 8]])
    p2 = stack([[1, 0, 1], [0, 1, 0]], [[0, 0, 0], [0, 0, 1]])
    return {"A": a, "P1": p1, "core": core, "P2": p2}


@pytest.fixture
def example_two():
    return stack([[1, 1, 1.5], [0, 1, 1.5], [1, 1, 1.5]], [[0, 0, 0.5], [0, 0, 0.5], [0, 0, 0.5]])


@pytest.fixture
def small_coseparable():
    """Noiseless 12x10x3 co-(3,2)-separable tensor with its ground truth."""
    return gen_synthetic(SynthSpec(m=12, n=10, p=3, r1=3, r2=2, seed=7))


@pytest.fixture
def low_tubal_rank():
    """Factory for random tensors of tubal rank at most r."""

    def make(rng, m, n, p, r):
        return tprod(rng.standard_normal((m, r, p)), rng.standard_normal((r, n, p)))

    return make
