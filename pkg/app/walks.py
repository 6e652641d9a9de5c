"""Monte Carlo simulators for the four equivalent walk formulations.

Every formulation starts at the north pole and produces the same k-step
law; they differ in how a step is realized:

- drunkard:      advance θ along a uniformly random direction;
- potted_plant:  rotate by θ about a uniform equatorial axis;
- rotate_spin:   fixed rotation R_θ, then a uniform spin about the z-axis;
- bi_invariant:  uniform spin about the z-axis, then a potted-plant step.

Rotations act on the current position (Y_k = g_k · Y_{k-1}). Trajectories
are simulated in fixed blocks, each with its own Philox substream keyed by
``(seed, block)``, so results are reproducible bit for bit and independent
of the thread count.
"""
import io
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from app import legendre
from app.models import Formulation, WalkConfig
from app.parallel import map_items
from app.sphere import (
    NORTH,
    UnitVec3,
    axis_angle_rotation,
    normalize_rows,
    rodrigues_batch,
    tangent_basis,
    z_rotation_batch,
)

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1024
TWO_PI = 2.0 * math.pi
EQUATOR_AXIS = UnitVec3(1.0, 0.0, 0.0)

# A (3,) point, an (m, 3) array of points, or a UnitVec3; steps return the same kind.
Point = np.ndarray | UnitVec3
StepFn = Callable[[Point, float, np.random.Generator], Point]


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _as_rows(y: Point) -> tuple[np.ndarray, str]:
    """Rows to step, and how to hand them back: ``"vec"``, ``"point"`` or ``"rows"``."""
    if isinstance(y, UnitVec3):
        return y.to_array()[None, :], "vec"
    arr = np.asarray(y, dtype=float)
    return np.atleast_2d(arr), "point" if arr.ndim == 1 else "rows"


def _restore(out: np.ndarray, form: str) -> Point:
    if form == "vec":
        return UnitVec3.from_array(out[0])
    return out[0] if form == "point" else out


# ---------------------------------------------------------------------------
# Single steps (row-wise on (m, 3) arrays, a single (3,) point or a UnitVec3)
# ---------------------------------------------------------------------------


def step_drunkard(y: Point, theta: float, rng: np.random.Generator) -> Point:
    pts, form = _as_rows(y)
    e1, e2 = tangent_basis(pts)
    phi = rng.uniform(0.0, TWO_PI, size=pts.shape[0])
    direction = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
    out = normalize_rows(math.cos(theta) * pts + math.sin(theta) * direction)
    return _restore(out, form)


def step_potted(y: Point, theta: float, rng: np.random.Generator) -> Point:
    pts, form = _as_rows(y)
    psi = rng.uniform(0.0, TWO_PI, size=pts.shape[0])
    axes = np.column_stack((np.cos(psi), np.sin(psi), np.zeros_like(psi)))
    out = rodrigues_batch(pts, axes, theta)
    return _restore(out, form)


def step_rotate_spin(y: Point, theta: float, rng: np.random.Generator) -> Point:
    pts, form = _as_rows(y)
    r_theta = axis_angle_rotation(EQUATOR_AXIS, theta).matrix
    moved = normalize_rows(pts @ r_theta.T)
    spin = rng.uniform(0.0, TWO_PI, size=pts.shape[0])
    out = z_rotation_batch(moved, spin)
    return _restore(out, form)


def step_biinvariant(y: Point, theta: float, rng: np.random.Generator) -> Point:
    pts, form = _as_rows(y)
    spin = rng.uniform(0.0, TWO_PI, size=pts.shape[0])
    out = step_potted(z_rotation_batch(pts, spin), theta, rng)
    return _restore(out, form)


STEPS: dict[Formulation, StepFn] = {
    Formulation.DRUNKARD: step_drunkard,
    Formulation.POTTED_PLANT: step_potted,
    Formulation.ROTATE_SPIN: step_rotate_spin,
    Formulation.BI_INVARIANT: step_biinvariant,
}


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SampleSet:
    config: WalkConfig
    cos_polar: np.ndarray
    points: np.ndarray | None = None

    def __post_init__(self) -> None:
        cos_polar = np.array(self.cos_polar, dtype=float)
        if cos_polar.shape != (self.config.m,):
            raise ValueError(f"expected {self.config.m} samples, got {cos_polar.shape}")
        if np.any(np.abs(cos_polar) > 1.0):
            raise ValueError("cos_polar entries must lie in [-1, 1]")
        cos_polar.setflags(write=False)
        object.__setattr__(self, "cos_polar", cos_polar)
        if self.points is not None:
            points = np.array(self.points, dtype=float)
            if points.shape != (self.config.m, 3):
                raise ValueError(f"expected points of shape ({self.config.m}, 3), got {points.shape}")
            points.setflags(write=False)
            object.__setattr__(self, "points", points)

    @property
    def m(self) -> int:
        return self.config.m

    def to_csv(self, include_points: bool = True) -> str:
        """CSV text: ``trajectory,cos_polar[,x,y,z]`` with 17 significant digits."""
        with_points = include_points and self.points is not None
        buf = io.StringIO()
        buf.write("trajectory,cos_polar,x,y,z\n" if with_points else "trajectory,cos_polar\n")
        for i, c in enumerate(self.cos_polar):
            if with_points:
                x, y, z = self.points[i]
                buf.write(f"{i},{c:.17g},{x:.17g},{y:.17g},{z:.17g}\n")
            else:
                buf.write(f"{i},{c:.17g}\n")
        return buf.getvalue()


def _run_block(config: WalkConfig, block: int) -> np.ndarray:
    start = block * BLOCK_SIZE
    size = min(config.m, start + BLOCK_SIZE) - start
    rng = block_generator(config.seed, block)
    step = STEPS[config.formulation]
    pts = np.tile(NORTH.to_array(), (size, 1))
    for _ in range(config.k):
        pts = step(pts, config.theta, rng)
    return pts


def run_walk(config: WalkConfig, threads: int | None = None) -> SampleSet:
    """Simulate ``config.m`` independent k-step trajectories from the pole."""
    blocks = range(math.ceil(config.m / BLOCK_SIZE))
    logger.info("simulating %d %s trajectories, theta=%g, k=%d",
                config.m, config.formulation.value, config.theta, config.k)
    chunks = map_items(lambda b: _run_block(config, b), blocks, threads)
    points = np.concatenate(chunks, axis=0)
    return SampleSet(config=config, cos_polar=np.clip(points[:, 2], -1.0, 1.0), points=points)


def empirical_moment(samples: SampleSet, n: int) -> float:
    """Sample mean of Pₙ(cos polar angle)."""
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    return float(np.mean(legendre.legendre_table(n, samples.cos_polar)[n]))


def moment_tolerance(m: int, factor: float = 4.0) -> float:
    return factor / math.sqrt(m)


# ---------------------------------------------------------------------------
# Statistical checks
# ---------------------------------------------------------------------------


def azimuth_chi_square(points: np.ndarray, bins: int = 16) -> float:
    """p-value of a chi-square uniformity test on the azimuths of ``points``."""
    azimuth = np.mod(np.arctan2(points[:, 1], points[:, 0]), TWO_PI)
    counts, _ = np.histogram(azimuth, bins=bins, range=(0.0, TWO_PI))
    return float(stats.chisquare(counts).pvalue)


def step_azimuths(start: np.ndarray, end: np.ndarray) -> np.ndarray:
    """Direction of each step measured in the tangent frame at its start."""
    e1, e2 = tangent_basis(start)
    return np.mod(np.arctan2(np.einsum("ij,ij->i", end, e2), np.einsum("ij,ij->i", end, e1)), TWO_PI)


def ks_equivalence(a: SampleSet, b: SampleSet) -> float:
    """Two-sample Kolmogorov-Smirnov p-value on the cos_polar samples."""
    return float(stats.ks_2samp(a.cos_polar, b.cos_polar).pvalue)
