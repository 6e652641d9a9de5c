"""Self-verification suite run by ``main.py verify``.

Each check returns a ``CheckResult``; a check that raises is recorded as a
failure so the report is always complete.
"""
import itertools
import logging
import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special

from app import bounds, discrepancy, legendre, spectral, walks
from app.models import CheckResult, Formulation, WalkConfig
from app.sphere import geodesic_distance_batch, uniform_points

logger = logging.getLogger(__name__)

SEED = 20_240_601
THETAS = (0.5, 1.0, math.pi / 2.0, 2.2)
ENVELOPE_C = (4.0, 8.0, 16.0)
MOMENT_THETAS = (0.7, math.pi / 2.0, 2.2)
MOMENT_KS = (2, 5, 10)
MOMENT_DEGREES = range(1, 6)
CHAIN_KS = (2, 3, 4, 6, 8, 12, 16, 20, 30, 40, 60)
MONOTONE_THETAS = (0.5, 1.0, 2.2)
MONOTONE_K_MAX = 40
SIGNIFICANCE = 0.001
STEP_SAMPLES = 10_000
SERIES_SLACK = 1e-9
EXACT_SLACK = 1e-12
IDENTITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class Profile:
    name: str
    m: int
    k_max: int


PROFILES = {
    "quick": Profile("quick", m=20_000, k_max=20),
    "full": Profile("full", m=100_000, k_max=60),
}


@lru_cache(maxsize=64)
def _samples(formulation: Formulation, theta: float, k: int, m: int, threads: int | None) -> walks.SampleSet:
    config = WalkConfig(theta=theta, k=k, formulation=formulation, seed=SEED, m=m)
    return walks.run_walk(config, threads=threads)


def _fmt(x: float) -> str:
    return f"{x:.3e}"


# ---------------------------------------------------------------------------
# Discrepancy and bounds
# ---------------------------------------------------------------------------


def check_sandwich(profile: Profile, threads: int | None) -> CheckResult:
    """Exact D(k) against the closed-form envelope for C in {4, 8, 16}."""
    worst_upper = -math.inf
    worst_lower = -math.inf
    closed_cleared = 0
    failures = []
    for C, theta in itertools.product(ENVELOPE_C, THETAS):
        s2 = math.sin(theta) ** 2
        k_up = bounds.steps_for(C, theta)
        up = discrepancy.exact_discrepancy(theta, k_up, threads=threads)
        excess = up.value - bounds.upper_bound_closed(k_up * s2) - up.uncertainty
        worst_upper = max(worst_upper, excess)
        if excess > 0:
            failures.append(f"upper C={C:g} theta={theta:.4f} k={k_up}")

        k_lo = bounds.steps_within(C, theta)
        low = discrepancy.exact_discrepancy(theta, k_lo, threads=threads)
        proven = max(bounds.lower_bound_dominant(theta, k_lo), bounds.lower_bound_plancherel(theta, k_lo))
        shortfall = proven - low.value - low.uncertainty
        worst_lower = max(worst_lower, shortfall)
        if shortfall > 0:
            failures.append(f"lower C={C:g} theta={theta:.4f} k={k_lo}")
        if low.value + low.uncertainty >= bounds.lower_bound_closed(k_lo * s2):
            closed_cleared += 1

    cases = len(ENVELOPE_C) * len(THETAS)
    detail = f"closed lower form cleared in {closed_cleared}/{cases} cases"
    if failures:
        detail += "; violations: " + ", ".join(failures)
    return CheckResult(
        name="closed-form envelope (sandwich)",
        passed=not failures,
        measured=f"max upper excess {_fmt(worst_upper)}, max lower shortfall {_fmt(worst_lower)}",
        tolerance="<= 0 after reported uncertainty",
        detail=detail,
    )


def check_bound_chain(profile: Profile, threads: int | None) -> CheckResult:
    """dominant <= Plancherel <= exact <= series at every grid point."""
    failures = []
    worst_single = 0.0
    ks = [k for k in CHAIN_KS if k <= profile.k_max]
    for theta, k in itertools.product(THETAS, ks):
        report = bounds.bound_report(theta, k)
        exact = discrepancy.exact_discrepancy(theta, k, refine=False, threads=threads)
        tag = f"theta={theta:.4f} k={k}"
        if report.lower_dominant > report.lower_plancherel + EXACT_SLACK:
            failures.append(f"dominant>plancherel {tag}")
        if report.lower_plancherel > exact.value + exact.uncertainty:
            failures.append(f"plancherel>exact {tag}")
        if report.upper_series is not None and exact.value > report.upper_series + SERIES_SLACK:
            failures.append(f"exact>series {tag}")
        single = bounds.plancherel_profile(theta, k, 1, [math.pi / 2.0])[0]
        worst_single = max(worst_single, abs(single - report.lower_dominant))
    if worst_single > EXACT_SLACK:
        failures.append("single-term Plancherel != dominant term")
    return CheckResult(
        name="bound chain",
        passed=not failures,
        measured=f"{len(THETAS) * len(ks)} (theta, k) pairs; single-term gap {_fmt(worst_single)}",
        tolerance=f"ordering; single-term gap <= {EXACT_SLACK:g}",
        detail=", ".join(failures),
    )


def check_monotonicity(profile: Profile, threads: int | None) -> CheckResult:
    k_max = min(MONOTONE_K_MAX, profile.k_max)
    worst = -math.inf
    failures = []
    for theta in MONOTONE_THETAS:
        prev = None
        for k in range(2, k_max + 1):
            cur = discrepancy.exact_discrepancy(theta, k, refine=False, threads=threads)
            if prev is not None:
                rise = cur.value - prev.value - cur.uncertainty - prev.uncertainty
                worst = max(worst, rise)
                if rise > 0:
                    failures.append(f"theta={theta:g} k={k}")
            prev = cur
    return CheckResult(
        name="monotonicity in k",
        passed=not failures,
        measured=f"max rise beyond uncertainty {_fmt(worst)} for k=2..{k_max}",
        tolerance="<= 0",
        detail=", ".join(failures),
    )


def check_empirical_vs_exact(profile: Profile, threads: int | None) -> CheckResult:
    theta, k = 1.0, 6
    samples = _samples(Formulation.DRUNKARD, theta, k, profile.m, threads)
    emp = discrepancy.empirical_discrepancy(samples, n_centers=128, n_radii=128, threads=threads)
    exact = discrepancy.exact_discrepancy(theta, k, threads=threads)
    gap = abs(emp.value - exact.value)
    allowed = emp.uncertainty + exact.uncertainty
    return CheckResult(
        name="empirical vs exact discrepancy",
        passed=bool(gap <= allowed),
        measured=f"|{emp.value:.5f} - {exact.value:.5f}| = {_fmt(gap)}",
        tolerance=f"<= {_fmt(allowed)}",
    )


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------


def check_spectral_vs_monte_carlo(profile: Profile, threads: int | None) -> CheckResult:
    theta, k = 1.0, 5
    samples = _samples(Formulation.DRUNKARD, theta, k, profile.m, threads)
    gammas = np.linspace(0.0, math.pi, 5)
    radii = (0.4, 0.8, 1.2, 1.6, 2.0)
    within = 0
    worst = 0.0
    for gamma in gammas:
        center = np.array([math.sin(gamma), 0.0, math.cos(gamma)])
        dots = samples.points @ center
        for r in radii:
            freq = float(np.mean(dots >= math.cos(r)))
            p, _ = spectral.cap_probability(theta, k, float(gamma), r)
            p = spectral.clamp_probability(p)
            sigma = math.sqrt(p * (1.0 - p) / samples.m)
            z = abs(freq - p) / sigma if sigma > 0 else (0.0 if freq == p else math.inf)
            worst = max(worst, z)
            if abs(freq - p) <= 4.0 * sigma + EXACT_SLACK:
                within += 1
    total = len(gammas) * len(radii)
    return CheckResult(
        name="spectral vs Monte Carlo caps",
        passed=within >= total - 1,
        measured=f"{within}/{total} caps within 4 sigma (worst {worst:.2f} sigma)",
        tolerance=f">= {total - 1}/{total}",
    )


def check_moments(profile: Profile, threads: int | None) -> CheckResult:
    tol = walks.moment_tolerance(profile.m)
    worst = 0.0
    failures = []
    for form, theta, k in itertools.product(Formulation, MOMENT_THETAS, MOMENT_KS):
        samples = _samples(form, theta, k, profile.m, threads)
        for n in MOMENT_DEGREES:
            gap = abs(walks.empirical_moment(samples, n) - spectral.moment(theta, k, n))
            worst = max(worst, gap)
            if gap > tol:
                failures.append(f"{form.value} theta={theta:g} k={k} n={n}")
    return CheckResult(
        name="moment identity",
        passed=not failures,
        measured=f"max |moment - P_n(cos theta)^k| = {_fmt(worst)}",
        tolerance=f"<= 4/sqrt(m) = {_fmt(tol)}",
        detail=", ".join(failures),
    )


def check_formulation_equivalence(profile: Profile, threads: int | None) -> CheckResult:
    pairs = list(itertools.combinations(Formulation, 2))
    cells = list(itertools.product(MOMENT_THETAS, MOMENT_KS))
    alpha = SIGNIFICANCE / (len(pairs) * len(cells))
    gap_tol = walks.moment_tolerance(profile.m, factor=6.0)
    min_p = 1.0
    worst_gap = 0.0
    failures = []
    for (theta, k), (a, b) in itertools.product(cells, pairs):
        sa = _samples(a, theta, k, profile.m, threads)
        sb = _samples(b, theta, k, profile.m, threads)
        p = walks.ks_equivalence(sa, sb)
        min_p = min(min_p, p)
        if p < alpha:
            failures.append(f"KS {a.value}/{b.value} theta={theta:g} k={k}")
        for n in MOMENT_DEGREES:
            gap = abs(walks.empirical_moment(sa, n) - walks.empirical_moment(sb, n))
            worst_gap = max(worst_gap, gap)
            if gap > gap_tol:
                failures.append(f"moment {a.value}/{b.value} theta={theta:g} k={k} n={n}")
    return CheckResult(
        name="formulation equivalence",
        passed=not failures,
        measured=f"min KS p-value {min_p:.4g}; max moment gap {_fmt(worst_gap)}",
        tolerance=f"p >= {alpha:.3g} (family-wise {SIGNIFICANCE:g}); gap <= {_fmt(gap_tol)}",
        detail=", ".join(failures),
    )


def check_step_sizes(profile: Profile, threads: int | None) -> CheckResult:
    theta = 1.0
    rng = walks.block_generator(SEED, 0)
    start = uniform_points(STEP_SAMPLES, rng)
    drunk = geodesic_distance_batch(start, walks.step_drunkard(start, theta, rng))
    potted = geodesic_distance_batch(start, walks.step_potted(start, theta, rng))
    bi = geodesic_distance_batch(start, walks.step_biinvariant(start, theta, rng))
    drunk_err = float(np.max(np.abs(drunk - theta)))
    potted_excess = float(np.max(potted - theta))
    bi_over = int(np.sum(bi > theta))
    passed = bool(drunk_err <= EXACT_SLACK and potted_excess <= EXACT_SLACK and bi_over > 0)
    return CheckResult(
        name="step-size contracts",
        passed=passed,
        measured=(f"drunkard |d-theta| <= {_fmt(drunk_err)}; potted max d-theta {_fmt(potted_excess)}; "
                  f"bi-invariant steps beyond theta {bi_over}/{STEP_SAMPLES}"),
        tolerance="1e-12; 1e-12; at least one",
    )


# ---------------------------------------------------------------------------
# Legendre facts
# ---------------------------------------------------------------------------


def check_integral_identity(profile: Profile, threads: int | None) -> CheckResult:
    """½∫_{cos r}^1 Pₙ(x) dx by quadrature against the closed form, table and scalar."""
    nmax = 50
    radii = np.linspace(0.0, math.pi, 64)
    closed = legendre.cap_coefficients(nmax, radii)
    worst_table = 0.0
    worst_scalar = 0.0
    for n in range(1, nmax + 1):
        for j, r in enumerate(radii):
            value, _ = integrate.quad(lambda x: special.eval_legendre(n, x), math.cos(r), 1.0,
                                      epsabs=1e-12, limit=200)
            worst_table = max(worst_table, abs(value / 2.0 - closed[n, j]))
            worst_scalar = max(worst_scalar, abs(value / 2.0 - legendre.cap_coefficient(n, float(r))))
    worst = max(worst_table, worst_scalar)
    return CheckResult(
        name="legendre integral identity",
        passed=bool(worst <= IDENTITY_TOLERANCE),
        measured=f"max error {_fmt(worst_table)} (table), {_fmt(worst_scalar)} (scalar) over n<=50 x 64 radii",
        tolerance=f"<= {IDENTITY_TOLERANCE:g}",
    )


def check_generating_function(profile: Profile, threads: int | None) -> CheckResult:
    t = 0.5
    xs = np.linspace(-1.0, 1.0, 101)
    table = legendre.legendre_table(80, xs)
    series = (table * (t ** np.arange(81))[:, None]).sum(axis=0)
    exact = 1.0 / np.sqrt(1.0 - 2.0 * xs * t + t * t)
    worst = float(np.max(np.abs(series - exact)))
    return CheckResult(
        name="legendre generating function",
        passed=bool(worst <= IDENTITY_TOLERANCE),
        measured=f"max error {_fmt(worst)} at t=0.5",
        tolerance=f"<= {IDENTITY_TOLERANCE:g}",
    )


def check_square_bounds(profile: Profile, threads: int | None) -> CheckResult:
    """Pₙ(cos θ)² against both library bounds on an n x θ grid."""
    nmax = 500
    thetas = [float(t) for t in np.linspace(0.0, math.pi, 130)[1:-1]]
    squares = legendre.legendre_table(nmax, np.cos(thetas))[1:] ** 2
    jackson_excess = -math.inf
    small_excess = -math.inf
    applicable = 0
    for n in range(1, nmax + 1):
        for j, theta in enumerate(thetas):
            square = float(squares[n - 1, j])
            jackson_excess = max(jackson_excess, square - legendre.bound_jackson(n, theta))
            if n * math.sin(theta) ** 2 <= legendre.SMALL_THETA_LIMIT:
                small_excess = max(small_excess, square - legendre.bound_small_theta(n, theta))
                applicable += 1
    passed = jackson_excess <= EXACT_SLACK and small_excess <= EXACT_SLACK
    return CheckResult(
        name="legendre square bounds",
        passed=passed,
        measured=f"max P^2 - jackson {_fmt(jackson_excess)}; max P^2 - small-angle {_fmt(small_excess)}",
        tolerance=f"<= 0 (n<={nmax} x {len(thetas)} angles)",
        detail=f"small-angle bound applies on {applicable} grid points",
    )


# ---------------------------------------------------------------------------
# Determinism
# ---------------------------------------------------------------------------


def check_determinism(profile: Profile, threads: int | None) -> CheckResult:
    config = WalkConfig(theta=1.0, k=3, seed=SEED, m=5_000)
    walk_same = all(
        np.array_equal(walks.run_walk(config, threads=1).points, walks.run_walk(config, threads=t).points)
        for t in (1, 8)
    )
    first = discrepancy.exact_discrepancy(1.0, 6, grid=(64, 64), threads=1)
    exact_same = all(
        discrepancy.exact_discrepancy(1.0, 6, grid=(64, 64), threads=t) == first for t in (1, 8)
    )
    return CheckResult(
        name="determinism across threads",
        passed=walk_same and exact_same,
        measured=f"walk identical: {walk_same}; exact identical: {exact_same}",
        tolerance="bit-identical with --threads 1 and 8",
    )


CHECKS: list[Callable[[Profile, int | None], CheckResult]] = [
    check_sandwich,
    check_bound_chain,
    check_spectral_vs_monte_carlo,
    check_moments,
    check_formulation_equivalence,
    check_step_sizes,
    check_integral_identity,
    check_generating_function,
    check_square_bounds,
    check_monotonicity,
    check_determinism,
    check_empirical_vs_exact,
]


def run_profile(name: str, threads: int | None = None) -> list[CheckResult]:
    profile = PROFILES[name]
    results = []
    for check in CHECKS:
        started = time.monotonic()
        try:
            result = check(profile, threads)
        except Exception as exc:
            logger.exception("check %s raised", check.__name__)
            result = CheckResult(
                name=check.__name__.removeprefix("check_").replace("_", " "),
                passed=False,
                measured="error",
                tolerance="-",
                detail=f"{type(exc).__name__}: {exc}",
            )
        result.seconds = time.monotonic() - started
        if result.passed:
            logger.info("check passed: %s (%.1fs)", result.name, result.seconds)
        else:
            logger.error("check failed: %s: %s", result.name, result.measured)
        results.append(result)
    _samples.cache_clear()
    return results
