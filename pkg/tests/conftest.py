import numpy as np
import pytest

from irfs.dataset_io import SplitSpec, split
from irfs.synthetic import majority_of_thresholds, separable

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def majority_data():
    return majority_of_thresholds(n_samples=500, n_informative=5, n_noise=15, seed=0)


@pytest.fixture(scope="session")
def majority_split(majority_data):
    d, _ = majority_data
    return split(d, SplitSpec(0.9, 0))


@pytest.fixture(scope="session")
def small_split():
    d, informative = majority_of_thresholds(n_samples=200, n_informative=3, n_noise=5, seed=3)
    train, test = split(d, SplitSpec(0.9, 3))
    return train, test, informative


@pytest.fixture(scope="session")
def separable_data():
    return separable(n_samples=80, n_features=3, seed=1)
