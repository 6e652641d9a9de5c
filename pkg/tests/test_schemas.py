"""The published JSON schemas stay in step with the result models."""
import json
from pathlib import Path

import pytest

from app.bounds import bound_report
from app.discrepancy import exact_discrepancy
from app.models import BoundReport, DiscrepancyResult, RunManifest
from app.output import dump_json

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"

SCHEMAS = {
    "bound_report.schema.json": BoundReport,
    "discrepancy_result.schema.json": DiscrepancyResult,
    "run_manifest.schema.json": RunManifest,
}


def _load(name):
    return json.loads((SCHEMA_DIR / name).read_text())


@pytest.mark.parametrize("name,model", SCHEMAS.items())
def test_schema_matches_model(name, model):
    schema = _load(name)
    generated = model.model_json_schema()
    assert schema["title"] == model.__name__
    assert set(schema["properties"]) == set(generated["properties"])
    assert set(schema["required"]) == set(generated.get("required", []))


def test_outputs_use_only_declared_fields():
    report = json.loads(dump_json(bound_report(1.0, 6)))
    assert set(report) <= set(_load("bound_report.schema.json")["properties"])
    result = json.loads(dump_json(exact_discrepancy(1.0, 20, grid=(16, 16), refine=False)))
    assert set(result) <= set(_load("discrepancy_result.schema.json")["properties"])
