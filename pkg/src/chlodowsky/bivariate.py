"""Bivariate Bernstein-Chlodowsky-Stancu operators on curve-bounded domains.

Every operator here is a double sum over node columns ``k = 0..m`` and rows
``j = 0..m_k``. A column with ``m_k = 0`` holds the single node ``v = 0``
with basis value 1.

Evaluation happens in the parametric square: a point (x, y) of the domain
corresponds to ``u = (x - alpha b) / ((beta - alpha) b)`` and
``v = (y - phi1(x)) / (phi2(x) - phi1(x))``, which are exactly the arguments
of the two shifted basis factors.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .basis import bernstein_all
from .domain import CurveDomain, NodeScheme

Func2D = Callable[[float, float], float]

DEFAULT_SEED = 42


@dataclass(frozen=True)
class ErrorReport:
    m: int
    sup_error: float
    mean_error: float
    grid_n: int
    scheme: NodeScheme | None = None
    b: float = math.nan
    seconds: float = 0.0

    def __post_init__(self):
        if not self.sup_error >= self.mean_error >= 0:
            raise ValueError(f"inconsistent errors: sup={self.sup_error}, mean={self.mean_error}")


def _inner_param(j: int, degree: int) -> float:
    return j / degree if degree else 0.0


def node_columns(g: Func2D, m: int, dom: CurveDomain, scheme: NodeScheme) -> list[np.ndarray]:
    """Values of ``g`` at the shifted nodes ``transform_point(k/m, j/m_k)``."""
    columns = []
    for k in range(m + 1):
        degree = scheme.mk(m, k)
        x = dom.interval.from_unit(k / m)
        lo, hi = dom.fiber(x)
        columns.append(np.array([g(x, (hi - lo) * _inner_param(j, degree) + lo) for j in range(degree + 1)]))
    return columns


def classical_node_columns(g: Func2D, m: int, dom: CurveDomain, scheme: NodeScheme) -> list[np.ndarray]:
    """Node values ``G(k b/m, j b/m_k)`` with ``G(x, t) = g(x, (phi2-phi1)(x) t/b + phi1(x))``."""
    b = dom.b
    columns = []
    for k in range(m + 1):
        degree = scheme.mk(m, k)
        x = k * b / m
        lo, hi = dom.fiber(x)
        ts = [j * b / degree if degree else 0.0 for j in range(degree + 1)]
        columns.append(np.array([g(x, (hi - lo) * t / b + lo) for t in ts]))
    return columns


def evaluate_parametric(columns: Sequence[np.ndarray], m: int, scheme: NodeScheme, u, v) -> np.ndarray:
    """``sum_k sum_j columns[k][j] p_{m,k}(u) p_{m_k,j}(v)`` over arrays of (u, v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    wx = bernstein_all(m, u)
    total = np.zeros(np.broadcast_shapes(u.shape, v.shape))
    for k in range(m + 1):
        wy = bernstein_all(scheme.mk(m, k), v)
        total += wx[..., k] * (wy @ columns[k])
    return total


def _check_degree(m: int) -> None:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")


def stancu_operator(g: Func2D, m: int, dom: CurveDomain, scheme: NodeScheme, x: float, y: float) -> float:
    """Bernstein-Chlodowsky-Stancu operator on a domain over ``[0, b]``."""
    _check_degree(m)
    if not dom.is_classical:
        raise ValueError("stancu_operator needs a domain over [0, b] (alpha = 0, beta = 1)")
    u, v = dom.to_parametric(x, y)
    columns = classical_node_columns(g, m, dom, scheme)
    return float(evaluate_parametric(columns, m, scheme, u, v))


def shifted_stancu_operator(g: Func2D, m: int, dom: CurveDomain, scheme: NodeScheme, x: float, y: float) -> float:
    """Shifted Stancu operator at a physical point of the domain."""
    _check_degree(m)
    u, v = dom.to_parametric(x, y)
    return float(evaluate_parametric(node_columns(g, m, dom, scheme), m, scheme, u, v))


def shifted_stancu_grid(g: Func2D, m: int, dom: CurveDomain, scheme: NodeScheme, u, v) -> np.ndarray:
    """Shifted Stancu operator at ``transform_point(u, v)`` for arrays ``u``, ``v``."""
    _check_degree(m)
    return evaluate_parametric(node_columns(g, m, dom, scheme), m, scheme, u, v)


def _boundary_at_nodes(dom: CurveDomain, m: int) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([dom.phi_tilde(1, k / m) for k in range(m + 1)])
    hi = np.array([dom.phi_tilde(2, k / m) for k in range(m + 1)])
    return lo, hi


def moment_y(dom: CurveDomain, m: int, scheme: NodeScheme, x: float, y: float) -> float:
    """Semi-closed form of the operator applied to ``g(x, y) = y``.

    Equals ``s * B[phi2 - phi1](x) + B[phi1](x)`` with ``s`` the relative
    height of ``y`` in its fiber and ``B`` the univariate shifted operator.
    Columns with ``m_k = 0`` only see their bottom node, so their share
    ``s * (phi2 - phi1)`` is taken back out; for the constant scheme the
    correction is zero.
    """
    _check_degree(m)
    u, s = dom.to_parametric(x, y)
    lo, hi = _boundary_at_nodes(dom, m)
    w = bernstein_all(m, u)
    height = hi - lo
    closed = s * float(w @ height) + float(w @ lo)
    degenerate = np.array([scheme.mk(m, k) == 0 for k in range(m + 1)])
    return closed - s * float(w[degenerate] @ height[degenerate])


def remainder_qm(dom: CurveDomain, m: int, scheme: NodeScheme, x: float, y: float) -> float:
    """Variance term ``Q_m(x, y)`` in the second y-moment; ``m_k = 0`` columns are skipped."""
    _check_degree(m)
    u, s = dom.to_parametric(x, y)
    lo, hi = _boundary_at_nodes(dom, m)
    w = bernstein_all(m, u)
    total = 0.0
    for k in range(m + 1):
        degree = scheme.mk(m, k)
        if degree:
            total += (hi[k] - lo[k]) ** 2 / degree * w[k]
    return s * (1.0 - s) * total


def moment_y2(dom: CurveDomain, m: int, scheme: NodeScheme, x: float, y: float) -> float:
    """Semi-closed form of the operator applied to ``g(x, y) = y^2``.

    ``s^2 B[(phi2-phi1)^2] + 2 s B[(phi2-phi1) phi1] + B[phi1^2] + Q_m`` with
    the same ``m_k = 0`` correction as :func:`moment_y`.
    """
    _check_degree(m)
    u, s = dom.to_parametric(x, y)
    lo, hi = _boundary_at_nodes(dom, m)
    w = bernstein_all(m, u)
    height = hi - lo
    shifted = s * s * height**2 + 2.0 * s * height * lo
    degenerate = np.array([scheme.mk(m, k) == 0 for k in range(m + 1)])
    closed = float(w @ shifted) + float(w @ lo**2) + remainder_qm(dom, m, scheme, x, y)
    return closed - float(w[degenerate] @ shifted[degenerate])


_BOX_OFFSETS =[(sx, sy) for sx in (-1.0, 0.0, 1.0) for sy in (-1.0, 0.0, 1.0) if (sx, sy) != (0.0, 0.0)]


def _modulus_from_anchors(g: Func2D, dom: CurveDomain, delta1, delta2, anchors, offsets) -> float:
    best = 0.0
    for x1, y1 in anchors:
        g1 = g(x1, y1)
        for dx, dy in offsets:
            x2, y2 = x1 + dx * delta1, y1 + dy * delta2
            if not dom.contains(x2, y2):
                continue
            best = max(best, abs(g(x2, y2) - g1))
    return best


def estimate_modulus(
    g: Func2D, dom: CurveDomain, delta1: float, delta2: float, samples: int = 200, seed: int = DEFAULT_SEED
) -> float:
    """Sampled lower estimate of the modulus of continuity ``w(delta1, delta2)``.

    Each of ``samples`` random anchors in the domain is compared against the
    corners and edge midpoints of its ``[-delta1, delta1] x [-delta2, delta2]``
    box plus four random points in the box; partners falling outside the
    domain are skipped.
    """
    if not (delta1 > 0 and delta2 > 0):
        raise ValueError("deltas must be positive")
    rng = np.random.default_rng(seed)
    uv = rng.random((samples, 2))
    anchors = [dom.transform_point(float(u), float(v)) for u, v in uv]
    offsets = _BOX_OFFSETS + [tuple(p) for p in rng.uniform(-1.0, 1.0, (4, 2))]
    return _modulus_from_anchors(g, dom, delta1, delta2, anchors, offsets)


def estimate_modulus_grid(g: Func2D, dom: CurveDomain, delta1: float, delta2: float, n: int = 21) -> float:
    """Deterministic variant of :func:`estimate_modulus` on an ``n x n`` parametric grid."""
    if not (delta1 > 0 and delta2 > 0):
        raise ValueError("deltas must be positive")
    ts = np.linspace(0.0, 1.0, n)
    anchors = [dom.transform_point(float(u), float(v)) for u in ts for v in ts]
    return _modulus_from_anchors(g, dom, delta1, delta2, anchors, _BOX_OFFSETS)


def parametric_grid(grid_n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major ``(u, v)`` grid, u outer; both arrays have length ``grid_n**2``."""
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    ts = np.linspace(0.0, 1.0, grid_n)
    uu, vv = np.meshgrid(ts, ts, indexing="ij")
    return uu.ravel(), vv.ravel()


def grid_errors(g: Func2D, m: int, dom: CurveDomain, scheme: NodeScheme, grid_n: int):
    """Points, exact values and operator values on the parametric grid."""
    u, v = parametric_grid(grid_n)
    points = [dom.transform_point(float(a), float(c)) for a, c in zip(u, v)]
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    exact = np.array([g(x, y) for x, y in points])
    approx = shifted_stancu_grid(g, m, dom, scheme, u, v)
    return u, v, xs, ys, exact, approx


def error_report(g: Func2D, m: int, dom: CurveDomain, scheme: NodeScheme, grid_n: int) -> ErrorReport:
    start = time.perf_counter()
    *_, exact, approx = grid_errors(g, m, dom, scheme, grid_n)
    err = np.abs(exact - approx)
    return ErrorReport(
        m=m,
        sup_error=float(np.max(err)),
        mean_error=float(np.mean(err)),
        grid_n=grid_n,
        scheme=scheme,
        b=dom.b,
        seconds=time.perf_counter() - start,
    )


def convergence_study(
    g: Func2D,
    dom_family: Callable[[int], CurveDomain],
    scheme: NodeScheme,
    ms: Sequence[int],
    grid_n: int = 41,
) -> list[ErrorReport]:
    """Sup and mean grid error of the shifted Stancu operator for each ``m``."""
    if not ms:
        raise ValueError("ms must be nonempty")
    return [error_report(g, m, dom_family(m), scheme, grid_n) for m in ms]

