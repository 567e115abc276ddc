import numpy as np
import pytest

from tunneltime import backend


@pytest.fixture(params=backend.available())
def kernels(request):
    """Each available kernel backend in turn."""
    return backend.get(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
