"""Tests for the analytic upper and lower bounds."""
import math

import numpy as np
import pytest

from app.bounds import (
    DOMINANT_CONSTANT,
    bound_report,
    lower_bound_closed,
    lower_bound_dominant,
    lower_bound_plancherel,
    mixing_steps,
    plancherel_profile,
    plancherel_radii,
    steps_for,
    steps_within,
    upper_bound_closed,
    upper_bound_series,
    upper_bound_split,
)
from app.legendre import legendre_eval


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def test_upper_closed_values():
    assert upper_bound_closed(16.0) == pytest.approx(4.442 * math.exp(-2.0))
    assert upper_bound_closed(16.0) == pytest.approx(0.60114, abs=1e-4)
    assert upper_bound_closed(8.0) == 1.0
    assert upper_bound_closed(0.1) == 1.0
    with pytest.raises(ValueError):
        upper_bound_closed(0.0)


def test_lower_closed_values():
    assert lower_bound_closed(0.0) == pytest.approx(0.4330)
    assert lower_bound_closed(4.0) == pytest.approx(0.4330 * math.exp(-2.0))
    with pytest.raises(ValueError):
        lower_bound_closed(-1.0)


def test_closed_forms_decrease_in_c():
    cs = np.linspace(0.5, 60, 50)
    upper = [upper_bound_closed(c) for c in cs]
    lower = [lower_bound_closed(c) for c in cs]
    assert all(a >= b for a, b in zip(upper, upper[1:]))
    assert all(a > b for a, b in zip(lower, lower[1:]))


# ---------------------------------------------------------------------------
# Series and split bounds
# ---------------------------------------------------------------------------


def test_series_diverges_at_two():
    assert upper_bound_series(1.0, 2) == math.inf


def test_series_rejects_single_step():
    with pytest.raises(ValueError):
        upper_bound_series(1.0, 1)


def test_series_at_right_angle_includes_leading_even_term():
    value = upper_bound_series(math.pi / 2, 4)
    assert value > 1 / 16 + legendre_eval(4, 0.0) ** 4
    assert value < 1.0


@pytest.mark.parametrize("theta,k", [(1.0, 8), (2.2, 10), (0.5, 12), (1.0, 40)])
def test_split_dominates_series(theta, k):
    assert upper_bound_split(theta, k) >= upper_bound_series(theta, k) - 1e-9


def test_split_needs_three_steps():
    with pytest.raises(ValueError):
        upper_bound_split(1.0, 2)


def test_series_at_small_angle_uses_certified_cutoff():
    value = upper_bound_series(0.005, 160_002)
    assert math.isfinite(value)
    assert abs(legendre_eval(1, math.cos(0.005))) ** 160_002 < value < 1.0


def test_series_decreases_with_k():
    values = [upper_bound_series(1.0, k) for k in (4, 8, 16, 32)]
    assert all(a > b for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# Lower bounds
# ---------------------------------------------------------------------------


def test_dominant_value():
    assert lower_bound_dominant(math.pi / 3, 4) == pytest.approx(math.sqrt(3) / 64)
    assert lower_bound_dominant(math.pi / 2, 4) == pytest.approx(0.0, abs=1e-60)


def test_plancherel_radii_include_right_angle():
    radii = plancherel_radii(10)
    assert math.pi / 2 in radii
    assert radii[0] == 0.0 and radii[-1] == math.pi
    assert np.all(np.diff(radii) > 0)
    with pytest.raises(ValueError):
        plancherel_radii(1)


def test_single_term_plancherel_is_dominant():
    """With n = 1 only, the profile peaks at r = π/2 at (√3/4)|cos θ|ᵏ."""
    for theta, k in ((0.4, 3), (1.0, 6), (2.5, 5)):
        value = lower_bound_plancherel(theta, k, n_terms=1, r_grid=65)
        assert value == pytest.approx(lower_bound_dominant(theta, k), rel=1e-12)
    assert DOMINANT_CONSTANT == pytest.approx(0.4330, abs=1e-4)


def test_plancherel_monotone_in_terms():
    values = [lower_bound_plancherel(1.2, 4, n_terms=n, r_grid=129) for n in (1, 2, 5, 20)]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_plancherel_profile_vanishes_at_trivial_caps():
    profile = plancherel_profile(1.0, 3, 10, [0.0, math.pi])
    assert np.allclose(profile, 0.0, atol=1e-15)


def test_plancherel_below_series():
    for theta, k in ((0.7, 4), (1.5, 8), (2.4, 6)):
        assert lower_bound_plancherel(theta, k) <= upper_bound_series(theta, k)


# ---------------------------------------------------------------------------
# Step counts and reports
# ---------------------------------------------------------------------------


def test_steps_for():
    assert steps_for(8.0, math.pi / 2) == 8
    assert steps_for(0.1, math.pi / 2) == 2
    assert steps_for(1.0, math.pi / 6) == 4
    with pytest.raises(ValueError):
        steps_for(1.0, 0.0)


def test_steps_within():
    assert steps_within(8.0, math.pi / 2) == 8
    assert steps_within(8.5, math.pi / 2) == 8
    assert steps_within(1.0, math.pi / 6) == 4
    assert steps_within(0.1, math.pi / 2) == 2


@pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 3, 0.1, 1.0, 2.2])
def test_step_counts_recover_k_from_C(theta):
    s2 = math.sin(theta) ** 2
    for k in range(2, 41):
        assert steps_for(k * s2, theta) == k
        assert steps_within(k * s2, theta) == k


@pytest.mark.parametrize("theta,target", [(1.0, 0.1), (math.pi / 2, 0.01), (0.3, 0.5)])
def test_mixing_steps_is_smallest(theta, target):
    k = mixing_steps(theta, target)
    s2 = math.sin(theta) ** 2
    assert upper_bound_closed(k * s2) <= target
    assert k == 2 or upper_bound_closed((k - 1) * s2) > target


def test_mixing_steps_target_range():
    with pytest.raises(ValueError):
        mixing_steps(1.0, 1.0)
    with pytest.raises(ValueError):
        mixing_steps(1.0, 0.0)


def test_bound_report_fields():
    report = bound_report(1.0, 8)
    assert report.C == pytest.approx(8 * math.sin(1.0) ** 2)
    assert report.upper_series is not None
    assert report.upper_split is not None
    assert report.lower_dominant <= report.lower_plancherel <= report.upper_series
    assert report.upper_closed == upper_bound_closed(report.C)


def test_bound_report_at_two_steps():
    report = bound_report(1.0, 2)
    assert report.upper_series is None
    assert report.upper_split is None
    assert report.lower_closed == pytest.approx(lower_bound_closed(2 * math.sin(1.0) ** 2))


def test_bound_report_rejects_single_step():
    with pytest.raises(ValueError):
        bound_report(1.0, 1)
