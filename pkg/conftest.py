import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mfviability.dynamics import build_system  # noqa: E402
from mfviability.lifted import LiftedMeasure  # noqa: E402
from mfviability.measures import AtomicMeasure  # noqa: E402
from mfviability.viability import DiracPairFamilyOracle  # noqa: E402

EXPERIMENTS = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'experiments')


def random_measure(rng, dim, max_atoms=6):
    k = int(rng.integers(1, max_atoms + 1))
    return AtomicMeasure(rng.random((k, dim)), rng.dirichlet(np.ones(k)))


def random_lift(rng, base, max_velocities=3, scale=1.0):
    fibers = []
    for _ in range(base.size):
        k = int(rng.integers(1, max_velocities + 1))
        fibers.append((scale * rng.normal(size=(k, base.dim)), rng.dirichlet(np.ones(k))))
    return LiftedMeasure(base, fibers)


def symmetric_pair_lift(center=0.5):
    return LiftedMeasure(AtomicMeasure.dirac([center]), [([[-1.0], [1.0]], [0.5, 0.5])])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def flip_system():
    """f = u, U = {-1, +1} on the circle."""
    return build_system('constant-controls', 1, {'controls': [[-1.0], [1.0]]})


@pytest.fixture
def dirac_pair_oracle():
    return DiracPairFamilyOracle([0.5], 0.25, resolution=1e-4)


@pytest.fixture
def benchmark_oracle():
    return DiracPairFamilyOracle([0.5], 0.25, resolution=0.02)


@pytest.fixture
def experiments_dir():
    return EXPERIMENTS
