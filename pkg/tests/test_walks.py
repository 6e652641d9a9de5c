"""Tests for the four walk simulators and their sample statistics."""
import math

import numpy as np
import pytest

from app import spectral
from app.models import Formulation, WalkConfig
from app.sphere import NORTH, UnitVec3, geodesic_distance, geodesic_distance_batch, uniform_points
from app.walks import (
    BLOCK_SIZE,
    STEPS,
    SampleSet,
    azimuth_chi_square,
    block_generator,
    empirical_moment,
    ks_equivalence,
    moment_tolerance,
    run_walk,
    step_azimuths,
    step_biinvariant,
    step_drunkard,
    step_potted,
)


def _config(formulation=Formulation.DRUNKARD, theta=1.0, k=3, m=3000, seed=7):
    return WalkConfig(theta=theta, k=k, formulation=formulation, seed=seed, m=m)


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("formulation", list(Formulation))
def test_zero_steps_stay_at_pole(formulation):
    samples = run_walk(_config(formulation, k=0, m=10))
    assert samples.m == 10
    assert np.all(samples.cos_polar == 1.0)


@pytest.mark.parametrize("formulation", list(Formulation))
def test_first_step_lands_at_theta(formulation):
    samples = run_walk(_config(formulation, theta=0.8, k=1, m=500))
    assert np.max(np.abs(samples.cos_polar - math.cos(0.8))) < 1e-12


def test_same_seed_same_points():
    a = run_walk(_config())
    b = run_walk(_config())
    assert np.array_equal(a.points, b.points)


def test_different_seed_different_points():
    a = run_walk(_config(seed=1))
    b = run_walk(_config(seed=2))
    assert not np.array_equal(a.points, b.points)


def test_thread_count_does_not_change_result():
    config = _config(m=3 * BLOCK_SIZE + 17)
    single = run_walk(config, threads=1)
    many = run_walk(config, threads=4)
    assert single.points.shape == (config.m, 3)
    assert np.array_equal(single.points, many.points)


def test_prefix_is_stable_across_sample_sizes():
    """Trajectory i depends only on (seed, i)."""
    small = run_walk(_config(m=BLOCK_SIZE))
    large = run_walk(_config(m=2 * BLOCK_SIZE))
    assert np.array_equal(small.points, large.points[:BLOCK_SIZE])


def test_points_stay_on_sphere():
    samples = run_walk(_config(k=25))
    assert np.allclose(np.linalg.norm(samples.points, axis=1), 1.0, atol=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("formulation", list(Formulation))
@pytest.mark.parametrize("theta,k", [(0.7, 2), (math.pi / 2, 5), (2.2, 10)])
def test_moment_identity(formulation, theta, k):
    samples = run_walk(_config(formulation, theta=theta, k=k, m=20_000, seed=11))
    tol = moment_tolerance(samples.m)
    for n in range(1, 6):
        assert abs(empirical_moment(samples, n) - spectral.moment(theta, k, n)) <= tol


@pytest.mark.slow
def test_formulations_agree_in_distribution():
    base = run_walk(_config(Formulation.DRUNKARD, k=4, m=20_000, seed=3))
    for formulation in (Formulation.POTTED_PLANT, Formulation.ROTATE_SPIN, Formulation.BI_INVARIANT):
        other = run_walk(_config(formulation, k=4, m=20_000, seed=4))
        assert ks_equivalence(base, other) > 0.001


def test_empirical_moment_rejects_negative_degree(walk_samples):
    with pytest.raises(ValueError):
        empirical_moment(walk_samples, -1)
    assert empirical_moment(walk_samples, 0) == 1.0


# ---------------------------------------------------------------------------
# Single steps
# ---------------------------------------------------------------------------


def test_drunkard_step_is_exactly_theta():
    rng = block_generator(5, 0)
    start = uniform_points(10_000, rng)
    d = geodesic_distance_batch(start, step_drunkard(start, 1.0, rng))
    assert np.max(np.abs(d - 1.0)) <= 1e-12


def test_potted_step_never_exceeds_theta():
    rng = block_generator(5, 1)
    start = uniform_points(10_000, rng)
    d = geodesic_distance_batch(start, step_potted(start, 1.0, rng))
    assert np.max(d) <= 1.0 + 1e-12


def test_biinvariant_step_can_exceed_theta():
    rng = block_generator(5, 2)
    start = uniform_points(10_000, rng)
    d = geodesic_distance_batch(start, step_biinvariant(start, 1.0, rng))
    assert np.any(d > 1.0)


def test_single_point_step_shape():
    rng = block_generator(0, 0)
    for step in STEPS.values():
        out = step(np.array([0.0, 0.0, 1.0]), 0.5, rng)
        assert out.shape == (3,)
        assert out[2] == pytest.approx(math.cos(0.5), abs=1e-12)


@pytest.mark.parametrize("formulation", list(Formulation))
def test_unit_vector_in_unit_vector_out(formulation):
    rng = block_generator(0, 0)
    start = UnitVec3.from_polar(0.3, 1.1)
    out = STEPS[formulation](start, 0.5, rng)
    assert isinstance(out, UnitVec3)
    if formulation is Formulation.DRUNKARD:
        assert geodesic_distance(start, out) == pytest.approx(0.5, abs=1e-12)
    assert geodesic_distance(NORTH, STEPS[formulation](NORTH, 0.5, rng)) == pytest.approx(0.5, abs=1e-12)


def test_drunkard_direction_is_uniform():
    rng = block_generator(9, 0)
    start = uniform_points(20_000, rng)
    end = step_drunkard(start, 0.6, rng)
    azimuths = step_azimuths(start, end)
    counts, _ = np.histogram(azimuths, bins=16, range=(0, 2 * math.pi))
    assert counts.min() > 0.8 * counts.mean()


def test_first_step_azimuths_uniform():
    samples = run_walk(_config(k=1, m=20_000, seed=13))
    assert azimuth_chi_square(samples.points) > 0.001


# ---------------------------------------------------------------------------
# SampleSet
# ---------------------------------------------------------------------------


def test_sample_set_validation():
    config = _config(m=3)
    with pytest.raises(ValueError):
        SampleSet(config=config, cos_polar=np.ones(2))
    with pytest.raises(ValueError):
        SampleSet(config=config, cos_polar=np.array([1.0, 1.5, 0.0]))
    with pytest.raises(ValueError):
        SampleSet(config=config, cos_polar=np.ones(3), points=np.ones((3, 2)))


def test_sample_set_is_read_only():
    samples = run_walk(_config(m=5))
    with pytest.raises(ValueError):
        samples.cos_polar[0] = 0.0


def test_csv_layout():
    samples = run_walk(_config(m=4, k=0))
    lines = samples.to_csv().splitlines()
    assert lines[0] == "trajectory,cos_polar,x,y,z"
    assert lines[1] == "0,1,0,0,1"
    assert len(lines) == 5
    short = samples.to_csv(include_points=False).splitlines()
    assert short[0] == "trajectory,cos_polar"
    assert short[2] == "1,1"


def test_csv_round_trips_floats():
    samples = run_walk(_config(m=20, k=3))
    rows = samples.to_csv(include_points=False).splitlines()[1:]
    parsed = np.array([float(row.split(",")[1]) for row in rows])
    assert np.array_equal(parsed, samples.cos_polar)
