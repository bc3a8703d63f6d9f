import functools

import numpy as np
import pytest

from qmatch import ModelKind, SimConfig, simulate


@functools.lru_cache(maxsize=64)
def bench(seed, effects="gaussian"):
    """Benchmark dataset at the standard 50 x 30 scale (cached per seed)."""
    return simulate(SimConfig(effect_dist=effects, seed=seed))


def fixed_design(out):
    return out.design.with_model(ModelKind.FIXED_EFFECTS)


def random_design(out):
    return out.design.with_model(ModelKind.RANDOM_EFFECTS)


@pytest.fixture
def rng():
    return np.random.default_rng(20260818)
