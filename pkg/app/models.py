"""Pydantic models for configuration inputs and machine-readable results."""
import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

MAX_SEED = 2**64 - 1

# Constants of the matching bounds: lower 0.4330 e^{-C/2}, upper 4.442 e^{-C/8}.
LOWER_CONSTANT = 0.4330
UPPER_CONSTANT = 4.442
BOUND_TOLERANCE = 1e-12


class Formulation(str, Enum):
    DRUNKARD = "drunkard"
    POTTED_PLANT = "potted_plant"
    ROTATE_SPIN = "rotate_spin"
    BI_INVARIANT = "bi_invariant"


class Method(str, Enum):
    EXACT_SPECTRAL = "exact_spectral"
    EMPIRICAL = "empirical"
    BOUND = "bound"


class WalkConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., gt=0, lt=math.pi)
    k: int = Field(..., ge=0)
    formulation: Formulation = Formulation.DRUNKARD
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    m: int = Field(..., ge=1)


class DiscrepancyResult(BaseModel):
    value: float = Field(..., ge=0)
    argmax_gamma: float
    argmax_r: float
    uncertainty: float = Field(..., ge=0)
    method: Method
    theta: float | None = None
    k: int | None = None
    degree: int | None = None
    certified: bool | None = None

    @model_validator(mode="after")
    def _value_within_unit(self):
        if self.value > 1.0 + self.uncertainty + BOUND_TOLERANCE:
            raise ValueError(f"discrepancy {self.value} exceeds 1 + uncertainty")
        return self


class BoundReport(BaseModel):
    theta: float
    k: int
    C: float
    upper_series: float | None = Field(
        default=None, description="Series bound; null when the series diverges (k = 2)."
    )
    upper_closed: float
    upper_split: float | None = None
    lower_dominant: float
    lower_plancherel: float
    lower_closed: float

    @model_validator(mode="after")
    def _dominant_below_plancherel(self):
        if self.lower_dominant > self.lower_plancherel + BOUND_TOLERANCE:
            raise ValueError("dominant-term bound exceeds the Plancherel bound")
        return self


class CurveRow(BaseModel):
    k: int
    lower_plancherel: float
    exact: float
    upper_series: float | None = None
    upper_closed: float
    uncertainty: float
    lower_dominant: float


class CheckResult(BaseModel):
    name: str
    passed: bool
    measured: str
    tolerance: str
    detail: str = ""
    seconds: float = 0.0


class RunManifest(BaseModel):
    command: str
    parameters: dict[str, Any]
    seed: int | None = None
    version: str
    duration_seconds: float = Field(..., ge=0)
    checksum: str = Field(..., pattern=r"^sha256:[0-9a-f]{64}$")
