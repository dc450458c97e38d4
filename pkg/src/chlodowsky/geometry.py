"""Square-to-triangle and square-to-disk transformed operators.

The printed transforms mix normalised and unnormalised coordinates; here
the parametric square is [0, 1]^2 for the triangle and the global disk map
and [0, b]^2 for the quadrant disk map, and every radicand is written so it
stays nonnegative on that range.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .basis import DOMAIN_TOL, comb_row
from .bivariate import Func2D, evaluate_parametric
from .domain import NodeScheme
from .errors import DomainError, SingularityError

DISK_TOL = 1e-12


@dataclass(frozen=True)
class TriangleDomain:
    """``{-b <= x <= b, y >= |x|, y <= b}``."""

    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b}")

    def contains(self, x: float, y: float, tol: float = DOMAIN_TOL) -> bool:
        slack = tol * self.b
        return abs(x) <= self.b + slack and y >= abs(x) - slack and y <= self.b + slack


@dataclass(frozen=True)
class DiskDomain:
    """Closed disk of radius ``b`` about the origin."""

    b: float

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b}")

    def contains(self, x: float, y: float, tol: float = DISK_TOL) -> bool:
        return x * x + y * y <= self.b * self.b * (1.0 + tol)


class Quadrant(enum.Enum):
    Q1 = (1, 1)
    Q2 = (-1, 1)
    Q3 = (-1, -1)
    Q4 = (1, -1)

    @property
    def signs(self) -> tuple[int, int]:
        return self.value

    @classmethod
    def classify(cls, x: float, y: float) -> Quadrant:
        """Quadrant of (x, y); points on an axis go to the lowest-numbered quadrant."""
        if x >= 0 and y >= 0:
            return cls.Q1
        if x <= 0 and y >= 0:
            return cls.Q2
        if x <= 0 and y <= 0:
            return cls.Q3
        return cls.Q4


def _check_unit(name: str, value: float) -> None:
    if not (-DOMAIN_TOL <= value <= 1.0 + DOMAIN_TOL):
        raise DomainError(f"{name}={value!r} outside domain [0, 1]")


def _raw_basis(m: int, s) -> np.ndarray:
    # Plain power form; the triangle display feeds it arguments in [-1, 1].
    s = np.asarray(s, dtype=float)[..., None]
    k = np.arange(m + 1)
    return comb_row(m) * s**k * (1.0 - s) ** (m - k)


def _inner_param(j: int, degree: int) -> float:
    return j / degree if degree else 0.0


# -- triangle ---------------------------------------------------------------

def square_to_triangle(u: float, v: float, b: float) -> tuple[float, float]:
    _check_unit("u", u)
    _check_unit("v", v)
    s = 2.0 * u - 1.0
    return b * s, b * (1.0 - v * (1.0 - abs(s)))


def triangle_to_square(x: float, y: float, b: float) -> tuple[float, float]:
    """Inverse of :func:`square_to_triangle`; the collapsed corners map to v = 0."""
    if not TriangleDomain(b).contains(x, y):
        raise DomainError(f"point ({x!r}, {y!r}) outside domain: triangle of size b={b!r}")
    s = min(max(x / b, -1.0), 1.0)
    u = 0.5 * (s + 1.0)
    width = 1.0 - abs(s)
    v = min(max((1.0 - y / b) / width, 0.0), 1.0) if width > 0 else 0.0
    return u, v


def triangle_nodes(m: int) -> list[list[tuple[float, float]]]:
    """Parametric nodes ``(k/m, 1 - j/m_k)`` with ``m_k = m - k``.

    Row ``j`` of column ``k`` sits where the inner weight argument
    ``1 - v (1 - |2u - 1|)`` (that is ``y/b``) grows with ``j``.
    """
    return [[(k / m, 1.0 - _inner_param(j, m - k)) for j in range(m - k + 1)] for k in range(m + 1)]


def triangle_grid(g: Func2D, m: int, b: float, u, v) -> np.ndarray:
    """Triangle operator at parametric points; weights follow the printed display.

    The outer weight is ``C(m,k) s^k (1-s)^(m-k)`` with ``s = 2u - 1``, which
    is negative for ``u < 1/2``, so the operator is not positive there.
    The weights still sum to one by the binomial theorem.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any((u < -DOMAIN_TOL) | (u > 1 + DOMAIN_TOL) | (v < -DOMAIN_TOL) | (v > 1 + DOMAIN_TOL)):
        raise DomainError("parametric point outside domain [0, 1]^2")
    u = np.clip(u, 0.0, 1.0)
    v = np.clip(v, 0.0, 1.0)
    s = 2.0 * u - 1.0
    a = 1.0 - v * (1.0 - np.abs(s))
    wx = _raw_basis(m, s)
    total = np.zeros(np.broadcast_shapes(u.shape, v.shape))
    for k, column in enumerate(triangle_nodes(m)):
        values = np.array([g(*square_to_triangle(uk, vj, b)) for uk, vj in column])
        total += wx[..., k] * (_raw_basis(m - k, a) @ values)
    return total


def triangle_operator(g: Func2D, m: int, b: float, u: float, v: float) -> float:
    _check_unit("u", u)
    _check_unit("v", v)
    return float(triangle_grid(g, m, b, u, v))


# -- disk, global map -------------------------------------------------------

def square_to_disk_global(u: float, v: float, b: float) -> tuple[float, float]:
    """``(b(2u-1), b(2v-1) sqrt(1 - (2u-1)^2))``; the image is the disk of radius b."""
    _check_unit("u", u)
    _check_unit("v", v)
    s = 2.0 * u - 1.0
    return b * s, b * (2.0 * v - 1.0) * math.sqrt(max(1.0 - s * s, 0.0))


def disk_global_to_square(x: float, y: float, b: float) -> tuple[float, float]:
    if not DiskDomain(b).contains(x, y):
        raise DomainError(f"point ({x!r}, {y!r}) outside domain: disk of radius {b!r}")
    s = min(max(x / b, -1.0), 1.0)
    half = b * math.sqrt(max(1.0 - s * s, 0.0))
    u = 0.5 * (s + 1.0)
    if half <= DISK_TOL * b:
        if abs(y) > DISK_TOL * b:
            raise SingularityError(f"vertical fiber degenerates at x={x!r} but y={y!r} != 0")
        return u, 0.5
    return u, min(max(0.5 * (y / half + 1.0), 0.0), 1.0)


def disk_global_columns(g: Func2D, m: int, scheme: NodeScheme, b: float) -> list[np.ndarray]:
    """Values at ``(b(2k-m)/m, b(2j-m_k)/m_k sqrt(1 - ((2k-m)/m)^2))``."""
    columns = []
    for k in range(m + 1):
        degree = scheme.mk(m, k)
        s = (2 * k - m) / m
        root = math.sqrt(max(1.0 - s * s, 0.0))
        columns.append(
            np.array([g(b * s, b * (2.0 * _inner_param(j, degree) - 1.0) * root) for j in range(degree + 1)])
        )
    return columns


def disk_global_grid(g: Func2D, m: int, scheme: NodeScheme, b: float, u, v) -> np.ndarray:
    """Global-map disk operator at parametric points of [0, 1]^2."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return evaluate_parametric(disk_global_columns(g, m, scheme, b), m, scheme, u, v)


def disk_operator_global(g: Func2D, m: int, scheme: NodeScheme, b: float, x: float, y: float) -> float:
    u, v = disk_global_to_square(x, y, b)
    return float(disk_global_grid(g, m, scheme, b, u, v))


# -- disk, four quadrant maps -----------------------------------------------

def square_to_disk_quadrant(q: Quadrant, u: float, v: float, b: float) -> tuple[float, float]:
    """``(s_x (u/b) sqrt(b^2 - v^2), s_y v)`` for ``(u, v)`` in [0, b]^2."""
    for name, value in (("u", u), ("v", v)):
        if not (-DOMAIN_TOL * b <= value <= b * (1.0 + DOMAIN_TOL)):
            raise DomainError(f"{name}={value!r} outside domain [0, {b!r}]")
    sx, sy = q.signs
    return sx * (u / b) * math.sqrt(max(b * b - v * v, 0.0)), sy * v


def disk_piecewise_nodes(m: int, b: float, q: Quadrant = Quadrant.Q1) -> list[list[tuple[float, float]]]:
    """Nodes ``(s_x (k/m) b sqrt(1 - (j/m_k)^2), s_y (j/m_k) b)`` with ``m_k = m - k``."""
    sx, sy = q.signs
    nodes = []
    for k in range(m + 1):
        degree = m - k
        column = []
        for j in range(degree + 1):
            t = _inner_param(j, degree)
            column.append((sx * (k / m) * b * math.sqrt(max(1.0 - t * t, 0.0)), sy * t * b))
        nodes.append(column)
    return nodes


def _piecewise_params(x, y, b):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x * x + y * y > b * b * (1.0 + DISK_TOL)):
        raise DomainError(f"point outside domain: disk of radius {b!r}")
    fiber = np.sqrt(np.maximum(b * b - y * y, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(fiber > 0, np.abs(x) / fiber, 0.0)
    return np.clip(s, 0.0, 1.0), np.clip(np.abs(y) / b, 0.0, 1.0)


def disk_piecewise_grid(g: Func2D, m: int, b: float, x, y) -> np.ndarray:
    """Four-quadrant disk operator (``m_k = m - k``) at physical points."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    s, t = _piecewise_params(x, y, b)
    labels = np.array([Quadrant.classify(float(a), float(c)).name for a, c in zip(x, y)])
    out = np.empty(x.shape)
    for q in Quadrant:
        mask = labels == q.name
        if not np.any(mask):
            continue
        columns = [np.array([g(nx, ny) for nx, ny in col]) for col in disk_piecewise_nodes(m, b, q)]
        out[mask] = evaluate_parametric(columns, m, NodeScheme.DESCENDING, s[mask], t[mask])
    return out


def disk_operator_piecewise(g: Func2D, m: int, b: float, x: float, y: float) -> float:
    return float(disk_piecewise_grid(g, m, b, x, y)[0])


def seam_jump(g: Func2D, m: int, b: float, x: float, eps: float = 1e-9) -> float:
    """``|B(x, +eps) - B(x, -eps)|`` across the horizontal axis; a measured quantity."""
    return abs(disk_operator_piecewise(g, m, b, x, eps) - disk_operator_piecewise(g, m, b, x, -eps))

