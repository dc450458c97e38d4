"""Bernstein and shifted Bernstein-Chlodowsky basis polynomials.

Scalar evaluators take ``(m, k, ...)``; :func:`bernstein_all` returns every
``k`` at once for an array of parameters and is what the operators use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BasisIndexError, DegreeError, DomainError

# Product form below this degree, log-space above (C(60, 30) ~ 1.2e17 is not
# an exact double).
LOG_SPACE_DEGREE = 30
DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class BasisIndex:
    m: int
    k: int

    def __post_init__(self):
        check_index(self.m, self.k)


@dataclass(frozen=True)
class ShiftedInterval:
    """The interval ``[alpha*b, beta*b]`` carrying a shifted basis."""

    alpha: float
    beta: float
    b: float = 1.0

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b}")
        if not self.alpha < self.beta:
            raise ValueError(f"need alpha < beta, got alpha={self.alpha}, beta={self.beta}")

    @classmethod
    def from_endpoints(cls, left: float, right: float) -> ShiftedInterval:
        """Interval with the given endpoints and ``b = 1``."""
        return cls(float(left), float(right), 1.0)

    @property
    def left(self) -> float:
        return self.alpha * self.b

    @property
    def right(self) -> float:
        return self.beta * self.b

    @property
    def width(self) -> float:
        return (self.beta - self.alpha) * self.b

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.left + self.right)

    def to_unit(self, x):
        """Map ``x`` in the interval to ``t`` in [0, 1]; works on arrays."""
        return (x - self.left) / self.width

    def from_unit(self, t):
        return self.width * t + self.left

    def nodes(self, m: int) -> np.ndarray:
        """Equispaced nodes ``(beta-alpha)*(k/m)*b + alpha*b``, k = 0..m."""
        k = np.arange(m + 1, dtype=float)
        return (self.beta - self.alpha) * (k / m) * self.b + self.alpha * self.b

    def contains(self, x: float, tol: float = DOMAIN_TOL) -> bool:
        slack = tol * self.width
        return self.left - slack <= x <= self.right + slack


def check_index(m: int, k: int) -> None:
    if m < 0:
        raise BasisIndexError(f"degree must be nonnegative, got m={m}")
    if not 0 <= k <= m:
        raise BasisIndexError(f"index k={k} outside [0, {m}]")


def _unit_param(t: float, what: str = "t") -> float:
    if not (-DOMAIN_TOL <= t <= 1.0 + DOMAIN_TOL):
        raise DomainError(f"{what}={t!r} outside domain [0, 1]")
    return min(max(t, 0.0), 1.0)


@lru_cache(maxsize=256)
def _logcomb_row(m: int) -> np.ndarray:
    # math.comb is exact, so log() of it is correctly rounded even past 2**53
    return np.array([math.log(math.comb(m, k)) for k in range(m + 1)])


@lru_cache(maxsize=256)
def comb_row(m: int) -> np.ndarray:
    return np.array([float(math.comb(m, k)) for k in range(m + 1)])


def bernstein(m: int, k: int, t: float) -> float:
    """``C(m,k) t^k (1-t)^(m-k)`` with exact Kronecker values at t = 0, 1."""
    check_index(m, k)
    t = _unit_param(float(t))
    if t == 0.0:
        return 1.0 if k == 0 else 0.0
    if t == 1.0:
        return 1.0 if k == m else 0.0
    if m <= LOG_SPACE_DEGREE:
        return math.comb(m, k) * t**k * (1.0 - t) ** (m - k)
    log_value = math.log(math.comb(m, k)) + k * math.log(t) + (m - k) * math.log1p(-t)
    return math.exp(log_value)


def bernstein_all(m: int, t) -> np.ndarray:
    """All degree-``m`` Bernstein polynomials at ``t``.

    ``t`` may be a scalar or an array; the result has shape ``t.shape + (m+1,)``.
    Values of ``t`` slightly outside [0, 1] (within 1e-12) are clamped.
    """
    if m < 0:
        raise BasisIndexError(f"degree must be nonnegative, got m={m}")
    t = np.asarray(t, dtype=float)
    if np.any((t < -DOMAIN_TOL) | (t > 1.0 + DOMAIN_TOL)) or np.any(np.isnan(t)):
        raise DomainError("parameter outside domain [0, 1]")
    t = np.clip(t, 0.0, 1.0)[..., None]
    k = np.arange(m + 1)
    if m <= LOG_SPACE_DEGREE:
        # numpy defines 0.0**0 == 1.0, which gives the endpoint deltas exactly
        return comb_row(m) * t**k * (1.0 - t) ** (m - k)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_t = np.where(k > 0, k * np.log(t), 0.0)
        log_s = np.where(k < m, (m - k) * np.log1p(-t), 0.0)
        out = np.exp(_logcomb_row(m) + log_t + log_s)
    out = np.where(t == 0.0, (k == 0).astype(float), out)
    out = np.where(t == 1.0, (k == m).astype(float), out)
    return out


def chlodowsky_basis(m: int, k: int, x: float, b: float) -> float:
    """``q_{m,k}(x/b)`` for ``0 <= x <= b``."""
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    if not (-DOMAIN_TOL * b <= x <= b * (1.0 + DOMAIN_TOL)):
        raise DomainError(f"x={x!r} outside domain [0, {b!r}]")
    return bernstein(m, k, min(max(x / b, 0.0), 1.0))


def shifted_basis(m: int, k: int, x: float, interval: ShiftedInterval) -> float:
    """Bernstein basis re-parametrised to ``[alpha*b, beta*b]``."""
    if not interval.contains(x):
        raise DomainError(f"x={x!r} outside domain [{interval.left!r}, {interval.right!r}]")
    t = (x - interval.left) / interval.width
    return bernstein(m, k, min(max(t, 0.0), 1.0))


def shifted_basis_derivative(m: int, k: int, x: float, interval: ShiftedInterval) -> float:
    """d/dx of :func:`shifted_basis` via the degree-lowering recurrence."""
    if m == 0:
        raise DegreeError("derivative recurrence needs m >= 1")
    check_index(m, k)
    lower = shifted_basis(m - 1, k - 1, x, interval) if k >= 1 else 0.0
    upper = shifted_basis(m - 1, k, x, interval) if k <= m - 1 else 0.0
    return m * (lower - upper) / interval.width


def basis_mode(m: int, k: int, interval: ShiftedInterval) -> tuple[float, float]:
    """Location and value of the maximum of the shifted basis polynomial."""
    if m == 0:
        raise DegreeError("mode is undefined for m = 0")
    check_index(m, k)
    x_star = (interval.beta - interval.alpha) * (k / m) * interval.b + interval.alpha * interval.b
    # int / int is correctly rounded in Python; 0**0 == 1
    value = math.comb(m, k) * k**k * (m - k) ** (m - k) / m**m
    return x_star, value
