"""The discrepancy D(k): exact spectral sup over caps and the sample estimator.

The exact path evaluates the deviation surface

    Δ(γ, r) = Σ_{n>=1} (2n+1) λₙᵏ · cap_coefficient(n, r) · Pₙ(cos γ)

on a (γ, r) grid as matrix products over degree blocks, takes the largest
absolute value, and polishes it with coordinate-wise golden-section search.
The reported uncertainty is the truncation tail plus a bound on what the
grid can miss between nodes.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from app import legendre
from app.config import settings
from app.models import DiscrepancyResult, Method
from app.parallel import map_items
from app.spectral import Truncation, check_theta, plan_cutoff, walk_spectrum
from app.sphere import fibonacci_lattice, uniform_cap_measure
from app.walks import SampleSet

logger = logging.getLogger(__name__)

# Columns of the r grid handled per work item; fixed so results never depend on threads.
COLUMN_CHUNK = 32
# Degree rows streamed per block of the grid surface.
DEGREE_BLOCK = 2048
REFINE_TOLERANCE = 1e-6
# The golden-section search locates the peak with at most this many degrees.
REFINE_DEGREE = 20_000
REFINE_SWEEPS = 2
MIN_SAMPLES = 1000
SIGNIFICANCE = 0.001

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


class InsufficientSamplesError(ValueError):
    """Too few samples for the empirical estimator."""


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section search for a maximum of ``f`` on [a, b].

    Reuses one interior evaluation per iteration and returns ``(x, f(x))``
    for the best point it visited.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = (a + b) / 2.0
        return x, f(x)
    steps = int(math.ceil(math.log(tol / h) / math.log(INVPHI)))
    c, d = a + INVPHI2 * h, a + INVPHI * h
    yc, yd = f(c), f(d)
    best = (c, yc) if yc >= yd else (d, yd)
    for _ in range(steps - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= INVPHI
            c = a + INVPHI2 * h
            yc = f(c)
            if yc > best[1]:
                best = (c, yc)
        else:
            a, c, yc = c, d, yd
            h *= INVPHI
            d = a + INVPHI * h
            yd = f(d)
            if yd > best[1]:
                best = (d, yd)
    return best


# ---------------------------------------------------------------------------
# Exact discrepancy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Surface:
    values: np.ndarray
    decade: np.ndarray | None


def _surface_block(
    p_gamma: np.ndarray,
    coeffs: np.ndarray,
    weights: np.ndarray,
    columns: slice,
    decade_rows: slice | None,
) -> _Surface:
    block = weights[:, None] * coeffs[:, columns]
    values = p_gamma.T @ block
    decade = None
    if decade_rows is not None:
        decade = np.abs(p_gamma[decade_rows]).T @ np.abs(block[decade_rows])
    return _Surface(values, decade)


def deviation_surface(
    theta: float,
    k: int,
    grid: tuple[int, int],
    cutoff: int,
    with_decade: bool = False,
    threads: int | None = None,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Δ(γ, r) on the grid, shape ``(n_gamma, n_r)``, plus the per-node decade tail.

    Degrees are streamed in blocks of ``DEGREE_BLOCK`` rows, so memory stays
    flat however large the cutoff is.
    """
    n_gamma, n_r = grid
    weights = walk_spectrum(theta, k, cutoff).weights()
    chunks = [slice(i, min(i + COLUMN_CHUNK, n_r)) for i in range(0, n_r, COLUMN_CHUNK)]
    decade_start = cutoff // 10 + 1
    logger.info("streaming %dx%d grid up to degree %d", n_gamma, n_r, cutoff)

    gamma_rows = legendre.LegendreStream(np.cos(np.linspace(0.0, math.pi, n_gamma)))
    radius_rows = legendre.LegendreStream(np.cos(np.linspace(0.0, math.pi, n_r)))
    gamma_rows.take(1)
    window = radius_rows.take(2)
    values = np.zeros((n_gamma, n_r))
    decade = np.zeros((n_gamma, n_r)) if with_decade else None
    for start in range(1, cutoff + 1, DEGREE_BLOCK):
        stop = min(start + DEGREE_BLOCK, cutoff + 1)
        p_gamma = gamma_rows.take(stop - start)
        window = np.vstack((window[-2:], radius_rows.take(stop - start)))
        coeffs = legendre.cap_coefficient_rows(start, window)
        block_weights = weights[start:stop]
        decade_rows = None
        if with_decade and stop > decade_start:
            decade_rows = slice(max(0, decade_start - start), None)
        parts = map_items(
            lambda cols: _surface_block(p_gamma, coeffs, block_weights, cols, decade_rows),
            chunks, threads,
        )
        values += np.concatenate([p.values for p in parts], axis=1)
        if decade_rows is not None:
            decade += np.concatenate([p.decade for p in parts], axis=1)

    if with_decade:
        ratio = 10.0 ** (-k / 2.0)
        decade *= ratio / (1.0 - ratio)
    return values, decade


def grid_gap(weights: np.ndarray, h_gamma: float, h_r: float) -> float:
    """How far the sup of |Δ| can sit above the best grid node.

    With peak |λₙ|ᵏ (using (2n+1)|cap_coefficient| <= 1), the degree-n term
    moves at most n·peak per radian of γ and (2n+1)/2·peak per radian of r
    (Bernstein); its second derivatives are at most n²·peak and
    (2n+1)(n+1)/2·peak. The smaller of the nearest-node and the bilinear
    interpolation bound is returned, each term capped at twice its peak.
    """
    n = np.arange(1, weights.size)
    peak = np.abs(weights[1:]) / (2 * n + 1)
    first = peak * (n * h_gamma + (2 * n + 1) / 2.0 * h_r) / 2.0
    second = peak * (n * n * h_gamma ** 2 + (2 * n + 1) * (n + 1) / 2.0 * h_r ** 2) / 8.0
    ceiling = 2.0 * peak
    return float(min(np.minimum(first, ceiling).sum(), np.minimum(second, ceiling).sum()))


class _PointEvaluator:
    """|Δ(γ, r)| at arbitrary points, caching the r-dependent coefficients."""

    def __init__(self, weights: np.ndarray):
        self.weights = weights
        self.cutoff = weights.size - 1
        self._r: float | None = None
        self._coeff: np.ndarray | None = None

    def coefficients(self, r: float) -> np.ndarray:
        if r != self._r:
            coeff = legendre.cap_coefficients(self.cutoff, [r])[:, 0]
            self._r, self._coeff = r, self.weights * coeff
        return self._coeff

    def __call__(self, gamma: float, r: float) -> float:
        p_gamma = legendre.legendre_batch(self.cutoff, math.cos(gamma)).values
        return abs(float(np.dot(self.coefficients(r), p_gamma)))


def _refine(evaluate: _PointEvaluator, gamma: float, r: float, value: float,
            h_gamma: float, h_r: float) -> tuple[float, float, float]:
    for _ in range(REFINE_SWEEPS):
        g_new, v = golden_section_max(
            lambda g: evaluate(g, r),
            max(0.0, gamma - h_gamma), min(math.pi, gamma + h_gamma),
            REFINE_TOLERANCE * h_gamma,
        )
        if v > value:
            gamma, value = g_new, v
        r_new, v = golden_section_max(
            lambda x: evaluate(gamma, x),
            max(0.0, r - h_r), min(math.pi, r + h_r),
            REFINE_TOLERANCE * h_r,
        )
        if v > value:
            r, value = r_new, v
    return gamma, r, value


def exact_discrepancy(
    theta: float,
    k: int,
    grid: tuple[int, int] | None = None,
    refine: bool | None = None,
    epsilon: float | None = None,
    strict: bool = False,
    threads: int | None = None,
) -> DiscrepancyResult:
    """sup over caps of |Q^{*k}(cap) - U(cap)| from the spectral series."""
    check_theta(theta)
    if k < 2:
        raise ValueError(f"exact discrepancy needs k >= 2, got {k}")
    n_gamma, n_r = grid or (settings.grid_gamma, settings.grid_r)
    if n_gamma < 2 or n_r < 2:
        raise ValueError("grid needs at least 2 nodes per axis")
    do_refine = settings.refine if refine is None else refine
    eps = settings.epsilon if epsilon is None else epsilon

    cutoff, certified_tail = plan_cutoff(theta, k, eps, strict=strict)
    logger.info("exact discrepancy theta=%g k=%d: degree %d (%s)",
                theta, k, cutoff, "certified" if certified_tail is not None else "direct")
    surface, decade = deviation_surface(
        theta, k, (n_gamma, n_r), cutoff, with_decade=certified_tail is None, threads=threads
    )
    if certified_tail is not None:
        trunc = Truncation(cutoff, certified_tail, certified=True)
    else:
        trunc = Truncation(cutoff, float(decade.max()), certified=False)

    magnitude = np.abs(surface)
    i, j = np.unravel_index(int(np.argmax(magnitude)), magnitude.shape)
    h_gamma = math.pi / (n_gamma - 1)
    h_r = math.pi / (n_r - 1)
    gamma, r, value = float(i * h_gamma), float(j * h_r), float(magnitude[i, j])

    weights = walk_spectrum(theta, k, cutoff).weights()
    if do_refine:
        search = _PointEvaluator(weights[:REFINE_DEGREE + 1])
        g, x, _ = _refine(search, gamma, r, search(gamma, r), h_gamma, h_r)
        full = search if cutoff <= REFINE_DEGREE else _PointEvaluator(weights)
        polished = full(g, x)
        if polished > value:
            gamma, r, value = g, x, polished

    gap = grid_gap(weights, h_gamma, h_r)
    return DiscrepancyResult(
        value=value,
        argmax_gamma=gamma,
        argmax_r=r,
        uncertainty=trunc.tail_bound + gap,
        method=Method.EXACT_SPECTRAL,
        theta=theta,
        k=k,
        degree=cutoff,
        certified=trunc.certified,
    )


# ---------------------------------------------------------------------------
# Empirical discrepancy
# ---------------------------------------------------------------------------


def empirical_uncertainty(m: int, n_centers: int, n_radii: int, alpha: float = SIGNIFICANCE) -> float:
    """Union-bound concentration radius over all tested caps."""
    return 2.0 * math.sqrt(math.log(2.0 * n_centers * n_radii / alpha) / (2.0 * m))


def _center_deviation(points: np.ndarray, center: np.ndarray, thresholds: np.ndarray,
                      uniform: np.ndarray) -> np.ndarray:
    dots = np.sort(points @ center)
    inside = dots.size - np.searchsorted(dots, thresholds, side="left")
    return np.abs(inside / dots.size - uniform)


def empirical_discrepancy(samples: SampleSet, n_centers: int = 256, n_radii: int = 256,
                          threads: int | None = None) -> DiscrepancyResult:
    """Sup over a finite family of caps of |empirical frequency - uniform measure|.

    Centers are a golden-spiral lattice plus both poles; radii a uniform
    grid on [0, π].
    """
    if samples.m < MIN_SAMPLES:
        raise InsufficientSamplesError(f"need at least {MIN_SAMPLES} samples, got {samples.m}")
    if samples.points is None:
        raise ValueError("empirical discrepancy needs sample points, not only polar angles")
    if n_centers < 1 or n_radii < 2:
        raise ValueError("need n_centers >= 1 and n_radii >= 2")

    centers = np.vstack((fibonacci_lattice(n_centers), [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]))
    radii = np.linspace(0.0, math.pi, n_radii)
    thresholds = np.cos(radii)
    uniform = np.array([uniform_cap_measure(r) for r in radii])
    points = samples.points

    deviations = map_items(
        lambda c: _center_deviation(points, c, thresholds, uniform), list(centers), threads
    )
    table = np.vstack(deviations)
    ci, ri = np.unravel_index(int(np.argmax(table)), table.shape)
    center = centers[ci]
    return DiscrepancyResult(
        value=float(table[ci, ri]),
        argmax_gamma=float(np.arccos(np.clip(center[2], -1.0, 1.0))),
        argmax_r=float(radii[ri]),
        uncertainty=empirical_uncertainty(samples.m, centers.shape[0], n_radii),
        method=Method.EMPIRICAL,
        theta=samples.config.theta,
        k=samples.config.k,
    )
