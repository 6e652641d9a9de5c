"""Tests for Pydantic input and result models."""
import math

import pytest
from pydantic import ValidationError

from app.models import (
    MAX_SEED,
    BoundReport,
    CheckResult,
    CurveRow,
    DiscrepancyResult,
    Formulation,
    Method,
    RunManifest,
    WalkConfig,
)


class TestWalkConfig:
    def test_valid_minimal(self):
        c = WalkConfig(theta=1.0, k=3, m=10)
        assert c.formulation == Formulation.DRUNKARD
        assert c.seed == 0

    def test_formulation_by_value(self):
        c = WalkConfig(theta=1.0, k=3, m=10, formulation="bi_invariant")
        assert c.formulation is Formulation.BI_INVARIANT

    def test_unknown_formulation_rejected(self):
        with pytest.raises(ValidationError):
            WalkConfig(theta=1.0, k=3, m=10, formulation="sober")

    @pytest.mark.parametrize("theta", [0.0, math.pi, -0.5, 4.0])
    def test_theta_open_interval(self, theta):
        with pytest.raises(ValidationError):
            WalkConfig(theta=theta, k=3, m=10)

    def test_negative_k_rejected(self):
        with pytest.raises(ValidationError):
            WalkConfig(theta=1.0, k=-1, m=10)

    def test_zero_samples_rejected(self):
        with pytest.raises(ValidationError):
            WalkConfig(theta=1.0, k=3, m=0)

    def test_seed_range(self):
        assert WalkConfig(theta=1.0, k=3, m=1, seed=MAX_SEED).seed == MAX_SEED
        with pytest.raises(ValidationError):
            WalkConfig(theta=1.0, k=3, m=1, seed=MAX_SEED + 1)
        with pytest.raises(ValidationError):
            WalkConfig(theta=1.0, k=3, m=1, seed=-1)

    def test_frozen(self):
        c = WalkConfig(theta=1.0, k=3, m=10)
        with pytest.raises(ValidationError):
            c.k = 4


class TestDiscrepancyResult:
    def test_valid(self):
        r = DiscrepancyResult(value=0.2, argmax_gamma=0.1, argmax_r=1.0, uncertainty=0.01, method="empirical")
        assert r.method is Method.EMPIRICAL
        assert r.degree is None

    def test_negative_value_rejected(self):
        with pytest.raises(ValidationError):
            DiscrepancyResult(value=-0.1, argmax_gamma=0, argmax_r=0, uncertainty=0, method=Method.BOUND)

    def test_value_above_one_needs_uncertainty(self):
        with pytest.raises(ValidationError):
            DiscrepancyResult(value=1.2, argmax_gamma=0, argmax_r=0, uncertainty=0.1, method=Method.BOUND)
        r = DiscrepancyResult(value=1.05, argmax_gamma=0, argmax_r=0, uncertainty=0.1, method=Method.BOUND)
        assert r.value == 1.05

    def test_json_dump_uses_enum_values(self):
        r = DiscrepancyResult(value=0.5, argmax_gamma=0, argmax_r=0, uncertainty=0, method=Method.EXACT_SPECTRAL)
        assert r.model_dump(mode="json")["method"] == "exact_spectral"


class TestBoundReport:
    def _report(self, **overrides):
        fields = dict(
            theta=1.0, k=4, C=2.8, upper_series=0.3, upper_closed=1.0,
            lower_dominant=0.02, lower_plancherel=0.03, lower_closed=0.1,
        )
        fields.update(overrides)
        return BoundReport(**fields)

    def test_valid(self):
        assert self._report().upper_split is None

    def test_series_may_be_null(self):
        assert self._report(upper_series=None).upper_series is None

    def test_dominant_above_plancherel_rejected(self):
        with pytest.raises(ValidationError):
            self._report(lower_dominant=0.05)


def test_curve_row_optional_series():
    row = CurveRow(k=2, lower_plancherel=0.1, exact=0.2, upper_closed=1.0, uncertainty=0.01, lower_dominant=0.05)
    assert row.upper_series is None


def test_check_result_defaults():
    c = CheckResult(name="x", passed=True, measured="1", tolerance="2")
    assert c.detail == ""
    assert c.seconds == 0.0


class TestRunManifest:
    def test_valid(self):
        m = RunManifest(command="bounds", parameters={"k": 4}, version="0.3.0",
                        duration_seconds=0.5, checksum="sha256:" + "0" * 64)
        assert m.seed is None

    def test_bad_checksum_rejected(self):
        with pytest.raises(ValidationError):
            RunManifest(command="bounds", parameters={}, version="0.3.0",
                        duration_seconds=0.5, checksum="md5:abc")

    def test_negative_duration_rejected(self):
        with pytest.raises(ValidationError):
            RunManifest(command="bounds", parameters={}, version="0.3.0",
                        duration_seconds=-1.0, checksum="sha256:" + "a" * 64)
