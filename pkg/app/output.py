"""Machine-readable output: JSON, CSV and run manifests."""
import hashlib
import json
import logging
import time
from pathlib import Path
from typing import Any, Iterable, Sequence

from pydantic import BaseModel

from app import __version__
from app.models import RunManifest

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


def format_float(x: float) -> str:
    return format(x, ".17g")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def model_csv(model: BaseModel) -> str:
    """One-row CSV of a model's fields, in declaration order."""
    data = model.model_dump(mode="json")
    return csv_text(list(data), [list(data.values())])


def dump_json(payload: BaseModel | list[BaseModel] | dict) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    if isinstance(payload, BaseModel):
        data = payload.model_dump(mode="json")
    elif isinstance(payload, list):
        data = [item.model_dump(mode="json") for item in payload]
    else:
        data = payload
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def checksum(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def manifest_path(out: Path) -> Path:
    return out.with_name(out.name + MANIFEST_SUFFIX)


def write_artifact(
    out: Path,
    text: str,
    command: str,
    parameters: dict[str, Any],
    started: float,
    seed: int | None = None,
) -> RunManifest:
    """Write ``text`` to ``out`` and its manifest next to it. OSError propagates."""
    data = text.encode("utf-8")
    out.write_bytes(data)
    manifest = RunManifest(
        command=command,
        parameters=parameters,
        seed=seed,
        version=__version__,
        duration_seconds=max(0.0, time.monotonic() - started),
        checksum=checksum(data),
    )
    manifest_path(out).write_text(dump_json(manifest), encoding="utf-8")
    logger.info("wrote %s (%d bytes, %s)", out, len(data), manifest.checksum)
    return manifest
