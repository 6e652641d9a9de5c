"""Shared fixtures for the spheremix test suite.

Environment variables MUST be set before any app imports because
app.config.Settings() evaluates at import time.
"""
import math
import os

# Set env vars before any app module is imported
os.environ.setdefault("SPHEREMIX_THREADS", "1")
os.environ.setdefault("SPHEREMIX_LOG_LEVEL", "WARNING")

import numpy as np
import pytest

from app.models import Formulation, WalkConfig
from app.walks import SampleSet, run_walk

SEED = 1234


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def walk_config():
    """Small drunkard's-walk configuration used across modules."""
    return WalkConfig(theta=1.0, k=5, formulation=Formulation.DRUNKARD, seed=SEED, m=20_000)


@pytest.fixture
def walk_samples(walk_config) -> SampleSet:
    return run_walk(walk_config, threads=1)


@pytest.fixture
def uniform_samples() -> SampleSet:
    """Haar-distributed points, the k -> infinity surrogate."""
    from app.sphere import uniform_points

    config = WalkConfig(theta=1.0, k=0, seed=SEED, m=20_000)
    points = uniform_points(config.m, np.random.default_rng(SEED))
    return SampleSet(config=config, cos_polar=np.clip(points[:, 2], -1.0, 1.0), points=points)


@pytest.fixture
def half_pi():
    return math.pi / 2.0
