"""Points on S², rotations of R³, geodesic distance and spherical caps.

The walk's state space and the group action shared by the rest of the
package. Scalar value objects (``UnitVec3``, ``Rotation3``, ``Cap``) carry
the invariants; the ``*_batch`` helpers apply the same maps row-wise to
``(m, 3)`` arrays for the simulators.
"""
import math
from dataclasses import dataclass

import numpy as np

UNIT_TOLERANCE = 1e-12

# ---------------------------------------------------------------------------
# Value objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitVec3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(norm2 - 1.0) > UNIT_TOLERANCE:
            raise ValueError(f"not a unit vector: |v|^2 = {norm2!r}")

    @classmethod
    def from_array(cls, v) -> "UnitVec3":
        """Build from any 3-sequence, renormalizing to unit length."""
        arr = np.asarray(v, dtype=float).reshape(3)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        arr = arr / norm
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    @classmethod
    def from_polar(cls, gamma: float, phi: float = 0.0) -> "UnitVec3":
        """Point at polar angle ``gamma`` from the north pole and azimuth ``phi``."""
        s = math.sin(gamma)
        return cls.from_array((s * math.cos(phi), s * math.sin(phi), math.cos(gamma)))

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> "UnitVec3":
        return UnitVec3(-self.x, -self.y, -self.z)


NORTH = UnitVec3(0.0, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class Rotation3:
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"rotation matrix must be 3x3, got {m.shape}")
        if not np.allclose(m @ m.T, np.eye(3), rtol=0.0, atol=UNIT_TOLERANCE):
            raise ValueError("rotation matrix is not orthogonal")
        if abs(np.linalg.det(m) - 1.0) > UNIT_TOLERANCE:
            raise ValueError("rotation matrix does not have determinant 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Rotation3":
        return cls(np.eye(3))

    def __matmul__(self, other: "Rotation3") -> "Rotation3":
        return Rotation3(self.matrix @ other.matrix)

    def inverse(self) -> "Rotation3":
        return Rotation3(self.matrix.T.copy())


@dataclass(frozen=True)
class Cap:
    """Closed spherical cap ``{v : d(center, v) <= radius}``."""

    center: UnitVec3
    radius: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.radius <= math.pi:
            raise ValueError(f"cap radius must lie in [0, pi], got {self.radius!r}")

    @property
    def polar_angle(self) -> float:
        return geodesic_distance(NORTH, self.center)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def geodesic_distance(u: UnitVec3, v: UnitVec3) -> float:
    dot = u.x * v.x + u.y * v.y + u.z * v.z
    return math.acos(min(1.0, max(-1.0, dot)))


def axis_angle_rotation(axis: UnitVec3, angle: float) -> Rotation3:
    """Rodrigues construction ``R = I + sin(a) K + (1 - cos(a)) K^2``."""
    kx, ky, kz = axis.x, axis.y, axis.z
    k = np.array([[0.0, -kz, ky],
                  [kz, 0.0, -kx],
                  [-ky, kx, 0.0]])
    r = np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)
    return Rotation3(r)


def z_rotation(angle: float) -> Rotation3:
    """Element of the isotropy subgroup fixing the north pole."""
    c, s = math.cos(angle), math.sin(angle)
    return Rotation3(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))


def rotate(rotation: Rotation3, v: UnitVec3) -> UnitVec3:
    return UnitVec3.from_array(rotation.matrix @ v.to_array())


def rotate_cap(rotation: Rotation3, cap: Cap) -> Cap:
    """Image of a cap under a rotation: same radius, rotated center."""
    return Cap(rotate(rotation, cap.center), cap.radius)


def cap_contains(cap: Cap, v: UnitVec3) -> bool:
    return geodesic_distance(cap.center, v) <= cap.radius


def uniform_cap_measure(r: float) -> float:
    if not 0.0 <= r <= math.pi:
        raise ValueError(f"cap radius must lie in [0, pi], got {r!r}")
    return (1.0 - math.cos(r)) / 2.0


# ---------------------------------------------------------------------------
# Batched helpers for (m, 3) arrays
# ---------------------------------------------------------------------------


def normalize_rows(points: np.ndarray) -> np.ndarray:
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def geodesic_distance_batch(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    dots = np.einsum("...i,...i->...", u, v)
    cross = np.linalg.norm(np.cross(u, v), axis=-1)
    return np.arctan2(cross, dots)


def tangent_basis(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal tangent frame ``(e1, e2)`` at each row of ``points``.

    ``e1`` is Gram-Schmidt of the coordinate axis least aligned with the
    point, so the frame never degenerates at the poles.
    """
    points = np.atleast_2d(points)
    axes = np.eye(3)[np.argmin(np.abs(points), axis=1)]
    e1 = axes - np.einsum("ij,ij->i", axes, points)[:, None] * points
    e1 = normalize_rows(e1)
    e2 = np.cross(points, e1)
    return e1, e2


def rodrigues_batch(points: np.ndarray, axes: np.ndarray, angle: float) -> np.ndarray:
    """Rotate each row of ``points`` about the matching row of ``axes``."""
    c, s = math.cos(angle), math.sin(angle)
    along = np.einsum("ij,ij->i", axes, points)[:, None]
    out = points * c + np.cross(axes, points) * s + axes * along * (1.0 - c)
    return normalize_rows(out)


def z_rotation_batch(points: np.ndarray, angles: np.ndarray) -> np.ndarray:
    c, s = np.cos(angles), np.sin(angles)
    out = np.empty_like(points)
    out[:, 0] = c * points[:, 0] - s * points[:, 1]
    out[:, 1] = s * points[:, 0] + c * points[:, 1]
    out[:, 2] = points[:, 2]
    return normalize_rows(out)


def uniform_points(m: int, rng: np.random.Generator) -> np.ndarray:
    """``m`` points distributed by the rotation-invariant measure on S²."""
    return normalize_rows(rng.standard_normal((m, 3)))


def fibonacci_lattice(n: int) -> np.ndarray:
    """Golden-section spiral of ``n`` nearly evenly spaced points."""
    inc = math.pi * (3.0 - math.sqrt(5.0))
    off = 2.0 / n
    k = np.arange(n)
    z = k * off - 1.0 + off / 2.0
    rho = np.sqrt(1.0 - z * z)
    phi = k * inc
    return np.column_stack((rho * np.cos(phi), rho * np.sin(phi), z))
