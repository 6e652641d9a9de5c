"""Analytic upper and lower bounds on the discrepancy D(k).

With C = k·sin²θ the walk satisfies

    0.4330 e^{-C/2} <= D(k) <= 4.442 e^{-C/8}

and each side comes from a sharper intermediate quantity: the series
Σ|Pₙ(cos θ)|ᵏ above, and the truncated Plancherel sum below.
"""
import logging
import math

import numpy as np

from app import legendre
from app.config import settings
from app.models import LOWER_CONSTANT, UPPER_CONSTANT, BoundReport
from app.spectral import certified_cutoff, check_theta

logger = logging.getLogger(__name__)

DOMINANT_CONSTANT = math.sqrt(3.0) / 4.0
SPLIT = legendre.SMALL_THETA_LIMIT
# Relative slack when C / sin²θ is rounded to a step count.
STEP_ROUNDING = 1e-9


def _check_k(k: int) -> None:
    if k < 2:
        raise ValueError(f"bounds need k >= 2, got {k}")


# ---------------------------------------------------------------------------
# Upper bounds
# ---------------------------------------------------------------------------


def upper_bound_series(theta: float, k: int, epsilon: float | None = None) -> float:
    """Σ_{n>=1} |Pₙ(cos θ)|ᵏ: partial sum plus the Jackson tail.

    Returns ``inf`` for k = 2, where the series diverges.
    """
    check_theta(theta)
    _check_k(k)
    if k == 2:
        logger.warning("series bound diverges at k=2 (theta=%g)", theta)
        return math.inf
    eps = settings.epsilon if epsilon is None else epsilon
    trunc = certified_cutoff(theta, k, eps)
    lam = np.abs(legendre.legendre_batch(trunc.degree, math.cos(theta)).values[1:])
    partial = math.fsum(np.sort(lam ** k)[::-1])
    return partial + trunc.tail_bound


def upper_bound_closed(C: float) -> float:
    if C <= 0:
        raise ValueError(f"C must be positive, got {C!r}")
    return min(1.0, UPPER_CONSTANT * math.exp(-C / 8.0))


def upper_bound_split(theta: float, k: int) -> float:
    """Two-regime estimate of the series bound.

    Degrees with n sin²θ <= 0.9 use the small-angle bound (a geometric
    series), the rest Jackson's bound and its tail integral. Needs k >= 3.
    """
    check_theta(theta)
    if k < 3:
        raise ValueError(f"split bound needs k >= 3, got {k}")
    s2 = math.sin(theta) ** 2
    q = math.exp(-k * s2 / 8.0)
    head = q / (1.0 - q)
    tail = (2.0 / (math.pi * SPLIT)) ** (k / 2.0) * (2.0 * SPLIT / ((k - 2) * s2) + 1.0)
    return head + tail


# ---------------------------------------------------------------------------
# Lower bounds
# ---------------------------------------------------------------------------


def lower_bound_dominant(theta: float, k: int) -> float:
    """(√3/4)|cos θ|ᵏ, the n = 1 term of the Plancherel sum at r = π/2."""
    _check_k(k)
    return DOMINANT_CONSTANT * abs(math.cos(theta)) ** k


def lower_bound_closed(C: float) -> float:
    if C < 0:
        raise ValueError(f"C must be non-negative, got {C!r}")
    return LOWER_CONSTANT * math.exp(-C / 2.0)


def plancherel_radii(r_grid: int) -> np.ndarray:
    """Uniform grid on [0, π] with π/2 always included."""
    if r_grid < 2:
        raise ValueError("r_grid must be at least 2")
    return np.unique(np.append(np.linspace(0.0, math.pi, r_grid), math.pi / 2.0))


def plancherel_profile(theta: float, k: int, n_terms: int, radii) -> np.ndarray:
    """sqrt(Σ_{n=1}^{n_terms} (2n+1)(λₙᵏ cap_coefficient(n, r))²) per radius."""
    check_theta(theta)
    _check_k(k)
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    coeffs = legendre.cap_coefficients(n_terms, radii)[1:]
    lam_k = legendre.legendre_batch(n_terms, math.cos(theta)).values[1:] ** k
    n = np.arange(1, n_terms + 1)
    terms = (2 * n + 1)[:, None] * (lam_k[:, None] * coeffs) ** 2
    return np.sqrt(terms.sum(axis=0))


def lower_bound_plancherel(
    theta: float,
    k: int,
    n_terms: int | None = None,
    r_grid: int | None = None,
) -> float:
    terms = settings.plancherel_terms if n_terms is None else n_terms
    radii = plancherel_radii(settings.plancherel_radii if r_grid is None else r_grid)
    return float(plancherel_profile(theta, k, terms, radii).max())


# ---------------------------------------------------------------------------
# Step counts and reports
# ---------------------------------------------------------------------------


def _step_quotient(C: float, theta: float) -> float:
    check_theta(theta)
    return C / math.sin(theta) ** 2


def steps_for(C: float, theta: float) -> int:
    """k = ⌈C / sin²θ⌉, at least 2.

    A quotient within ``STEP_ROUNDING`` (relative) of an integer counts as
    that integer: sin(π/6)² rounds just below 1/4, and C = 1 still gives 4.
    """
    q = _step_quotient(C, theta)
    return max(2, math.ceil(q * (1.0 - STEP_ROUNDING)))


def steps_within(C: float, theta: float) -> int:
    """k = ⌊C / sin²θ⌋, at least 2, with the same rounding slack as :func:`steps_for`."""
    q = _step_quotient(C, theta)
    return max(2, math.floor(q * (1.0 + STEP_ROUNDING)))


def mixing_steps(theta: float, target: float) -> int:
    """Smallest k whose closed-form upper bound is at most ``target``."""
    check_theta(theta)
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target!r}")
    s2 = math.sin(theta) ** 2
    k = max(2, math.ceil(8.0 * math.log(UPPER_CONSTANT / target) / s2))
    while k > 2 and upper_bound_closed((k - 1) * s2) <= target:
        k -= 1
    while upper_bound_closed(k * s2) > target:
        k += 1
    return k


def bound_report(theta: float, k: int) -> BoundReport:
    check_theta(theta)
    _check_k(k)
    C = k * math.sin(theta) ** 2
    series = upper_bound_series(theta, k)
    return BoundReport(
        theta=theta,
        k=k,
        C=C,
        upper_series=series if math.isfinite(series) else None,
        upper_closed=upper_bound_closed(C),
        upper_split=upper_bound_split(theta, k) if k >= 3 else None,
        lower_dominant=lower_bound_dominant(theta, k),
        lower_plancherel=lower_bound_plancherel(theta, k),
        lower_closed=lower_bound_closed(C),
    )
