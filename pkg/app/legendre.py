"""Legendre polynomials, the cap Fourier coefficient and the two bounds on Pₙ(cos θ)².

All evaluation goes through the upward three-term recurrence
``(n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}``, which is stable on [-1, 1].
Scalar and vectorized paths perform the identical floating-point
operations, so a table entry always equals the scalar evaluation.
"""
import math
from dataclasses import dataclass

import numpy as np

DOMAIN_SLACK = 1e-12

# Validity limit of the small-angle bound: n sin²θ <= 0.9.
SMALL_THETA_LIMIT = 0.9

# Below n sin²θ = 2 - sqrt(4 - 8/pi) the small-angle bound beats Jackson's.
BOUND_CROSSOVER = 2.0 - math.sqrt(4.0 - 8.0 / math.pi)


class DomainError(ValueError):
    """Argument outside the domain of a Legendre routine."""


@dataclass(frozen=True, eq=False)
class LegendreTable:
    x: float
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("table needs at least degree 0")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def nmax(self) -> int:
        return self.values.size - 1

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])

    def __len__(self) -> int:
        return self.values.size


def _check_x(x: float) -> float:
    if abs(x) > 1.0 + DOMAIN_SLACK or math.isnan(x):
        raise DomainError(f"Legendre argument outside [-1, 1]: {x!r}")
    return min(1.0, max(-1.0, float(x)))


def _check_degree(n: int) -> int:
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")
    return int(n)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def legendre_eval(n: int, x: float) -> float:
    n = _check_degree(n)
    x = _check_x(x)
    if n == 0:
        return 1.0
    p_prev, p = 1.0, x
    for j in range(1, n):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p


def legendre_batch(nmax: int, x: float) -> LegendreTable:
    """All of P₀(x) … P_nmax(x) in one recurrence pass."""
    nmax = _check_degree(nmax)
    x = _check_x(x)
    values = np.empty(nmax + 1)
    values[0] = 1.0
    if nmax >= 1:
        values[1] = x
    p_prev, p = 1.0, x
    for j in range(1, nmax):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
        values[j + 1] = p
    return LegendreTable(x=x, values=values)


def _check_xs(xs) -> np.ndarray:
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(np.abs(xs) > 1.0 + DOMAIN_SLACK) or np.any(np.isnan(xs)):
        raise DomainError("Legendre arguments outside [-1, 1]")
    return np.clip(xs, -1.0, 1.0)


class LegendreStream:
    """Rows P₀(xs), P₁(xs), … handed out in consecutive blocks.

    Keeps only the last two rows between calls, so arbitrarily high degrees
    can be walked through in bounded memory.
    """

    def __init__(self, xs):
        self.xs = _check_xs(xs)
        self.degree = 0
        self._prev: np.ndarray | None = None
        self._cur: np.ndarray | None = None

    def take(self, count: int) -> np.ndarray:
        """The next ``count`` rows, shape ``(count, len(xs))``."""
        rows = np.empty((count, self.xs.size))
        for i in range(count):
            j = self.degree - 1
            if self.degree == 0:
                row = np.ones_like(self.xs)
            elif self.degree == 1:
                row = self.xs.copy()
            else:
                row = ((2 * j + 1) * self.xs * self._cur - j * self._prev) / (j + 1)
            rows[i] = row
            self._prev, self._cur = self._cur, row
            self.degree += 1
        return rows


def legendre_table(nmax: int, xs) -> np.ndarray:
    """Vectorized recurrence: array of shape ``(nmax + 1, len(xs))``."""
    nmax = _check_degree(nmax)
    return LegendreStream(xs).take(nmax + 1)


# ---------------------------------------------------------------------------
# Cap coefficient
# ---------------------------------------------------------------------------


def cap_coefficient(n: int, r: float) -> float:
    """Signed (1,1) Fourier entry of the indicator of a cap of radius ``r``.

    Equals ½∫_{cos r}^1 Pₙ(x) dx = (P_{n-1}(cos r) - P_{n+1}(cos r)) / (2(2n+1)).
    """
    if n < 1:
        raise DomainError("cap_coefficient needs n >= 1; use uniform_cap_measure for n = 0")
    if not 0.0 <= r <= math.pi:
        raise DomainError(f"cap radius outside [0, pi]: {r!r}")
    table = legendre_batch(n + 1, math.cos(r))
    return (table[n - 1] - table[n + 1]) / (2 * (2 * n + 1))


def cap_coefficients(nmax: int, radii) -> np.ndarray:
    """Rows n = 0 … nmax of cap coefficients for each radius.

    Row 0 is zero: the trivial representation is carried by the uniform
    cap measure, not by this series.
    """
    nmax = _check_degree(nmax)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii < 0.0) or np.any(radii > math.pi):
        raise DomainError("cap radius outside [0, pi]")
    if radii.size == 1:
        # scalar recurrence, identical values, far fewer numpy calls
        table = legendre_batch(nmax + 1, math.cos(radii[0])).values[:, None]
    else:
        table = legendre_table(nmax + 1, np.cos(radii))
    coeffs = np.zeros((nmax + 1, radii.size))
    coeffs[1:] = cap_coefficient_rows(1, table)
    return coeffs


def cap_coefficient_rows(start: int, rows: np.ndarray) -> np.ndarray:
    """Cap coefficients for degrees ``start`` … ``start + len(rows) - 3``.

    ``rows`` holds P_{start-1}(cos r) … P_{stop}(cos r) for each radius, one
    radius per column, as produced by :class:`LegendreStream`.
    """
    if start < 1:
        raise DomainError("cap coefficients start at degree 1")
    n = np.arange(start, start + rows.shape[0] - 2)[:, None]
    return (rows[:-2] - rows[2:]) / (2 * (2 * n + 1))


# ---------------------------------------------------------------------------
# Bounds on Pₙ(cos θ)²
# ---------------------------------------------------------------------------


def bound_jackson(n: int, theta: float) -> float:
    """Jackson's bound ``Pₙ(cos θ)² <= 2 / (π n sin²θ)``."""
    if n < 1:
        raise DomainError("bound_jackson needs n >= 1")
    s2 = math.sin(theta) ** 2
    if not 0.0 < theta < math.pi or s2 == 0.0:
        raise DomainError(f"bound_jackson needs 0 < theta < pi, got {theta!r}")
    return 2.0 / (math.pi * n * s2)


def bound_small_theta(n: int, theta: float) -> float:
    """``Pₙ(cos θ)² <= 1 - n sin²θ / 4``, valid while ``n sin²θ <= 0.9``."""
    if n < 1:
        raise DomainError("bound_small_theta needs n >= 1")
    load = n * math.sin(theta) ** 2
    if load > SMALL_THETA_LIMIT + DOMAIN_SLACK:
        raise DomainError(f"bound_small_theta needs n sin^2(theta) <= 0.9, got {load!r}")
    return 1.0 - load / 4.0


def bound_square(n: int, theta: float) -> float:
    """Sharpest available bound on Pₙ(cos θ)² (never above 1)."""
    best = 1.0
    if 0.0 < theta < math.pi and math.sin(theta) != 0.0:
        best = min(best, bound_jackson(n, theta))
    if n * math.sin(theta) ** 2 <= SMALL_THETA_LIMIT + DOMAIN_SLACK:
        best = min(best, bound_small_theta(n, theta))
    return best
