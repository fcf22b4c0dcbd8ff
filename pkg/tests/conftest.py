import numpy as np
import pytest

from sympsig import kernels
from sympsig.sampling import DEFAULT_SEED


def pytest_report_header(config):
    return f"sympsig: kernel backend={kernels.backend()} seed={DEFAULT_SEED}"


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)
