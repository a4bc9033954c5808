"""
Pytest configuration and fixtures
"""

import numpy as np
import pytest

from tsumlab.config import get_settings, load_settings
from tsumlab.services.groups import cyclic, product, xor_group
from tsumlab.services.tsum import make_instance, random_instance


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings; CLI overrides must not leak"""
    monkeypatch.setenv("TSUMLAB_ENVIRONMENT", "testing")
    monkeypatch.setenv("TSUMLAB_PROGRESS", "false")
    load_settings.cache_clear()
    yield get_settings()
    load_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def cyclic7():
    return cyclic(7)


@pytest.fixture
def cyclic101():
    return cyclic(101)


@pytest.fixture
def xor3():
    return xor_group(3)


@pytest.fixture
def product_2_5():
    return product(cyclic(2), cyclic(5))


@pytest.fixture
def small_instance(cyclic7):
    """A1 = {1, 2}, A2 = {2, 4} over Z_7"""
    return make_instance(cyclic7, [1, 2], [2, 4])


@pytest.fixture
def empty_instance(cyclic7):
    return make_instance(cyclic7, [], [])


@pytest.fixture
def random_instance_101(cyclic101, rng):
    """n = 8 over Z_101"""
    return random_instance(cyclic101, 8, rng)
