"""Exact spectral engine for the k-step walk.

The walk's generator is bi-invariant, so its Fourier transform at the
degree-n representation is the single scalar λₙ = Pₙ(cos θ); after k steps
it is λₙᵏ. The probability of a cap of radius r whose center sits at polar
angle γ is then

    (1 - cos r)/2 + Σ_{n>=1} (2n+1) λₙᵏ · cap_coefficient(n, r) · Pₙ(cos γ)

and this module evaluates that series with explicit truncation control.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from app import legendre
from app.config import settings
from app.sphere import uniform_cap_measure

logger = logging.getLogger(__name__)

# Jackson/small-angle split point of the tail estimate.
TAIL_SPLIT = 0.9
DIRECT_SCALE = 100.0


class TruncationError(RuntimeError):
    """No admissible cutoff degree exists for the requested accuracy."""


@dataclass(frozen=True, eq=False)
class WalkSpectrum:
    theta: float
    k: int
    lambdas: np.ndarray

    def __post_init__(self) -> None:
        lam = np.array(self.lambdas, dtype=float)
        if lam[0] != 1.0 or np.any(np.abs(lam) > 1.0 + legendre.DOMAIN_SLACK):
            raise ValueError("walk spectrum must have lambda_0 = 1 and |lambda_n| <= 1")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @property
    def nmax(self) -> int:
        return self.lambdas.size - 1

    def powered(self) -> np.ndarray:
        """λₙᵏ for n = 0 … nmax."""
        return self.lambdas ** self.k

    def weights(self) -> np.ndarray:
        """Series weights (2n+1) λₙᵏ with the trivial term removed."""
        n = np.arange(self.nmax + 1)
        w = (2 * n + 1) * self.powered()
        w[0] = 0.0
        return w


@dataclass(frozen=True)
class Truncation:
    degree: int
    tail_bound: float
    certified: bool = True

    def __post_init__(self) -> None:
        if self.tail_bound < 0 or math.isnan(self.tail_bound):
            raise ValueError("tail bound must be non-negative")


def check_theta(theta: float) -> None:
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta!r}")


@lru_cache(maxsize=16)
def _lambda_table(theta: float, nmax: int) -> legendre.LegendreTable:
    return legendre.legendre_batch(nmax, math.cos(theta))


def walk_spectrum(theta: float, k: int, nmax: int) -> WalkSpectrum:
    check_theta(theta)
    table = _lambda_table(theta, nmax)
    return WalkSpectrum(theta=theta, k=k, lambdas=table.values)


# ---------------------------------------------------------------------------
# Coefficients and moments
# ---------------------------------------------------------------------------


def walk_coefficient(theta: float, k: int, n: int) -> float:
    """λₙᵏ = Pₙ(cos θ)ᵏ, the k-step transform at degree n."""
    check_theta(theta)
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return legendre.legendre_eval(n, math.cos(theta)) ** k


def moment(theta: float, k: int, n: int) -> float:
    """E[Pₙ(cos Θ_k)] for the polar angle Θ_k after k steps from the pole."""
    return walk_coefficient(theta, k, n)


# ---------------------------------------------------------------------------
# Truncation
# ---------------------------------------------------------------------------


def jackson_tail(theta: float, k: int, cutoff: int) -> float:
    """Certified bound on Σ_{n>cutoff} (2/(π n sin²θ))^{k/2}, for k > 2."""
    if k <= 2:
        raise ValueError("the Jackson tail integral needs k > 2")
    s2 = math.sin(theta) ** 2
    half = k / 2.0
    log_tail = (
        half * math.log(2.0 / (math.pi * s2))
        + (1.0 - half) * math.log(cutoff)
        + math.log(2.0 / (k - 2) + 1.0 / cutoff)
    )
    return math.exp(log_tail) if log_tail < 700.0 else math.inf


def truncation_for(theta: float, k: int, epsilon: float, max_degree: int | None = None) -> Truncation:
    """Smallest cutoff whose certified Jackson tail is at most ``epsilon``."""
    check_theta(theta)
    if k < 4:
        raise ValueError(f"certified truncation needs k >= 4, got {k}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    limit = max_degree or settings.max_degree
    lo = max(1, math.ceil(TAIL_SPLIT / math.sin(theta) ** 2))
    if lo > limit:
        raise TruncationError(f"theta={theta!r} needs a cutoff beyond {limit}")
    if jackson_tail(theta, k, lo) <= epsilon:
        return Truncation(lo, jackson_tail(theta, k, lo))
    if jackson_tail(theta, k, limit) > epsilon:
        raise TruncationError(
            f"no cutoff <= {limit} reaches tail {epsilon:g} for theta={theta!r}, k={k}"
        )
    hi = limit
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if jackson_tail(theta, k, mid) <= epsilon:
            hi = mid
        else:
            lo = mid
    return Truncation(hi, jackson_tail(theta, k, hi))


def direct_cutoff(theta: float) -> int:
    """Cutoff used when the series is summed without a certified tail (k = 2)."""
    cutoff = _direct_degree(theta)
    if cutoff > settings.max_degree:
        raise TruncationError(f"theta={theta!r} is too close to 0 or pi for direct summation")
    return cutoff


def _direct_degree(theta: float) -> int:
    return max(settings.direct_degree_floor, math.ceil(DIRECT_SCALE / math.sin(theta) ** 2))


def certified_cutoff(theta: float, k: int, epsilon: float) -> Truncation:
    """Cutoff with a proven Jackson tail, for k >= 3.

    For k >= 4 this is the smallest cutoff meeting ``epsilon`` when one
    exists up to ``max_degree``. Otherwise the series stops at the direct
    cutoff (never beyond ``max_degree``) and the Jackson tail there is
    reported: larger than ``epsilon``, still a bound.
    """
    check_theta(theta)
    if k < 3:
        raise ValueError(f"a certified tail needs k >= 3, got {k}")
    if k >= 4:
        try:
            return truncation_for(theta, k, epsilon)
        except TruncationError as exc:
            logger.warning("%s; reporting the Jackson tail at the direct cutoff", exc)
    cutoff = min(_direct_degree(theta), settings.max_degree)
    tail = jackson_tail(theta, k, cutoff)
    if math.isinf(tail):
        raise TruncationError(f"Jackson tail overflows at N={cutoff} for theta={theta!r}, k={k}")
    return Truncation(cutoff, tail)


def plan_cutoff(theta: float, k: int, epsilon: float, strict: bool = False) -> tuple[int, float | None]:
    """Pick the summation cutoff; returns ``(N, certified_tail or None)``.

    ``None`` only at k = 2, where no tail bound exists and callers fall
    back to the decade estimate. ``strict`` demands a certified tail of at
    most ``epsilon`` and raises :class:`TruncationError` otherwise.
    """
    check_theta(theta)
    if strict:
        if k < 4:
            raise TruncationError(f"a certified tail of {epsilon:g} needs k >= 4, got k={k}")
        trunc = truncation_for(theta, k, epsilon)
        return trunc.degree, trunc.tail_bound
    if k == 2:
        return direct_cutoff(theta), None
    trunc = certified_cutoff(theta, k, epsilon)
    return trunc.degree, trunc.tail_bound


def decade_tail(abs_terms: np.ndarray, k: int) -> float | np.ndarray:
    """Tail estimate from the last decade of absolute terms (axis 0 = degree).

    Assumes the terms decay like n^{-(1 + k/2)}; the decade sum is scaled by
    the ratio of the power-law tail beyond N to the power-law decade mass.
    """
    cutoff = abs_terms.shape[0] - 1
    decade = abs_terms[cutoff // 10 + 1:].sum(axis=0)
    ratio = 10.0 ** (-k / 2.0)
    return decade * ratio / (1.0 - ratio)


# ---------------------------------------------------------------------------
# Cap probabilities
# ---------------------------------------------------------------------------


def cap_deviation(
    theta: float,
    k: int,
    gamma: float,
    r: float,
    epsilon: float | None = None,
    strict: bool = False,
) -> tuple[float, Truncation]:
    """Q^{*k}(cap) - U(cap) for the cap of radius r centered at polar angle γ."""
    check_theta(theta)
    if k < 2:
        raise ValueError(f"exact cap probabilities need k >= 2, got {k}")
    if not 0.0 <= gamma <= math.pi or not 0.0 <= r <= math.pi:
        raise ValueError("gamma and r must lie in [0, pi]")
    eps = settings.epsilon if epsilon is None else epsilon
    cutoff, certified_tail = plan_cutoff(theta, k, eps, strict=strict)

    lam = _lambda_table(theta, cutoff).values[1:]
    p_gamma = legendre.legendre_batch(cutoff, math.cos(gamma)).values[1:]
    coeff = legendre.cap_coefficients(cutoff, [r])[1:, 0]
    n = np.arange(1, cutoff + 1)
    terms = (2 * n + 1) * lam ** k * coeff * p_gamma
    order = np.argsort(-np.abs(terms), kind="stable")
    value = math.fsum(terms[order])

    if certified_tail is not None:
        trunc = Truncation(cutoff, certified_tail, certified=True)
    else:
        abs_terms = np.concatenate(([0.0], np.abs(terms)))
        trunc = Truncation(cutoff, float(decade_tail(abs_terms, k)), certified=False)
    return value, trunc


def cap_probability(
    theta: float,
    k: int,
    gamma: float,
    r: float,
    epsilon: float | None = None,
    strict: bool = False,
) -> tuple[float, float]:
    """Probability that the k-step walk from the pole ends in the cap.

    Returns ``(probability, tail_bound)``; the probability is not clamped and
    lies in [-tail_bound, 1 + tail_bound].
    """
    deviation, trunc = cap_deviation(theta, k, gamma, r, epsilon=epsilon, strict=strict)
    return uniform_cap_measure(r) + deviation, trunc.tail_bound


def clamp_probability(value: float) -> float:
    return min(1.0, max(0.0, value))
