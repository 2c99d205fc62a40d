import numpy as np
import pytest

from locnash.lattices import Lattice1

# lighter truncation for unit tests: measured wp error ~3e-10 at factor 80,
# well under every unit-test tolerance; acceptance runs the default config
FAST_FACTOR = 80.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def square():
    return Lattice1(1.0, 1j)


@pytest.fixture(scope="session")
def rect():
    return Lattice1(1.0, 2j)


@pytest.fixture(scope="session")
def hexagonal():
    return Lattice1(1.0, np.exp(1j * np.pi / 3))
