"""Tests for JSON/CSV formatting, manifests and the verify report template."""
import hashlib
import json
import time

import pytest

from app import __version__
from app.config import settings
from app.context import render_verify_report
from app.models import BoundReport, CheckResult
from app.output import (
    MANIFEST_SUFFIX,
    checksum,
    csv_text,
    dump_json,
    format_float,
    manifest_path,
    model_csv,
    write_artifact,
)


def _report():
    return BoundReport(
        theta=1.0, k=2, C=1.4, upper_series=None, upper_closed=1.0,
        lower_dominant=0.1, lower_plancherel=0.2, lower_closed=0.21,
    )


def test_format_float_round_trips():
    for x in (0.1, 1 / 3, 1e-300, 2.0**60 + 1.0):
        assert float(format_float(x)) == x
    assert format_float(1.0) == "1"


def test_csv_cells():
    text = csv_text(["a", "b", "c", "d"], [[1, None, True, 0.5]])
    assert text == "a,b,c,d\n1,,true,0.5\n"


def test_model_csv_keeps_field_order():
    header, row = model_csv(_report()).splitlines()
    assert header.startswith("theta,k,C,upper_series,upper_closed")
    assert row.split(",")[3] == ""


def test_dump_json_is_stable():
    text = dump_json(_report())
    assert text.endswith("\n")
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["upper_series"] is None
    assert dump_json([_report(), _report()]).count('"theta"') == 2


def test_dump_json_rejects_nan():
    with pytest.raises(ValueError):
        dump_json({"x": float("nan")})


def test_checksum_format():
    assert checksum(b"abc") == "sha256:" + hashlib.sha256(b"abc").hexdigest()


def test_manifest_path(tmp_path):
    out = tmp_path / "curve.csv"
    assert manifest_path(out).name == "curve.csv" + MANIFEST_SUFFIX


def test_write_artifact(tmp_path):
    out = tmp_path / "samples.csv"
    manifest = write_artifact(out, "k,x\n1,2\n", "simulate", {"k": 1}, time.monotonic(), seed=9)
    assert out.read_text() == "k,x\n1,2\n"
    assert manifest.checksum == checksum(out.read_bytes())
    assert manifest.seed == 9
    assert manifest.version == __version__
    stored = json.loads(manifest_path(out).read_text())
    assert stored["command"] == "simulate"
    assert stored["parameters"] == {"k": 1}


def test_write_artifact_missing_directory(tmp_path):
    with pytest.raises(OSError):
        write_artifact(tmp_path / "nope" / "x.csv", "x", "bounds", {}, time.monotonic())


def test_verify_report_rendering():
    results = [
        CheckResult(name="sandwich", passed=True, measured="0 violations", tolerance="0", seconds=1.25),
        CheckResult(name="moments", passed=False, measured="0.2", tolerance="0.03", detail="n=3"),
    ]
    text = render_verify_report("quick", results, 3.0)
    assert text.startswith(f"spheremix {__version__} verify: profile=quick")
    assert "[PASS] sandwich" in text
    assert "[FAIL] moments" in text
    assert "detail:    n=3" in text
    assert "1/2 checks passed in 3.0s" in text
    assert "FAILED: moments" in text


def test_verify_report_shows_threads_used():
    results = [CheckResult(name="sandwich", passed=True, measured="ok", tolerance="0")]
    assert " threads=8 " in render_verify_report("quick", results, 0.5, threads=8).splitlines()[0]
    default = render_verify_report("quick", results, 0.5).splitlines()[0]
    assert f" threads={settings.threads} " in default


def test_verify_report_all_passing():
    results = [CheckResult(name="sandwich", passed=True, measured="ok", tolerance="0")]
    text = render_verify_report("full", results, 0.5)
    assert "1/1 checks passed" in text
    assert "FAILED" not in text
