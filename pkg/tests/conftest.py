import numpy as np
import pytest

from data.registry import resolve_example
from src.config import RunConfig
from src.symbolcore import TaylorSymbol


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def cfg():
    return RunConfig()


@pytest.fixture
def cardioid():
    return resolve_example('cardioid')


@pytest.fixture
def halfshift():
    return resolve_example('halfshift')


@pytest.fixture
def identity():
    return TaylorSymbol.identity()


@pytest.fixture
def z_squared():
    return TaylorSymbol.monomial(2)
