"""Curve-bounded planar domains and Stancu node schemes."""
from __future__ import annotations

import enum

import numpy as np

from .basis import DOMAIN_TOL, ShiftedInterval
from .errors import BasisIndexError, DegenerateColumnError, DomainError, InvalidDomainError
from .univariate import Func1D

VALIDATION_POINTS = 1000


class NodeScheme(enum.Enum):
    """Rule assigning the inner degree ``m_k`` to node column ``k``."""

    DESCENDING = "descending"  # m_k = m - k
    ASCENDING = "ascending"  # m_k = k
    CONSTANT = "constant"  # m_k = m

    @classmethod
    def parse(cls, name: str) -> NodeScheme:
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown node scheme {name!r}; expected one of {valid}") from None

    def mk(self, m: int, k: int) -> int:
        return mk(self, m, k)

    def degrees(self, m: int) -> list[int]:
        return [mk(self, m, k) for k in range(m + 1)]


def mk(scheme: NodeScheme, m: int, k: int) -> int:
    if not 0 <= k <= m:
        raise BasisIndexError(f"node index k={k} outside [0, {m}]")
    if scheme is NodeScheme.DESCENDING:
        return m - k
    if scheme is NodeScheme.ASCENDING:
        return k
    return m


class CurveDomain:
    """Region between ``y = phi1(x)`` and ``y = phi2(x)`` over ``x`` in ``interval``.

    Strict separation ``phi1 < phi2`` is checked on a 1000-point grid unless
    ``validate=False``. Unvalidated domains may fold over themselves; they
    remain usable through the parametric (u, v) evaluation paths.
    """

    def __init__(self, interval: ShiftedInterval, phi1: Func1D, phi2: Func1D, validate: bool = True):
        self.interval = interval
        self.phi1 = phi1
        self.phi2 = phi2
        self.validated = validate
        if validate:
            xs = np.linspace(interval.left, interval.right, VALIDATION_POINTS)
            gap = np.array([phi2(float(x)) - phi1(float(x)) for x in xs])
            worst = int(np.argmin(gap))
            if not gap[worst] > 0:
                raise InvalidDomainError(
                    f"boundary curves are not strictly separated: phi2 - phi1 = {gap[worst]:.6g} "
                    f"at x = {xs[worst]:.6g}"
                )

    def __repr__(self):
        return f"CurveDomain({self.interval!r}, phi1={self.phi1!r}, phi2={self.phi2!r})"

    @property
    def b(self) -> float:
        return self.interval.b

    @property
    def is_classical(self) -> bool:
        return self.interval.alpha == 0.0 and self.interval.beta == 1.0

    def phi_tilde(self, which: int, u: float) -> float:
        """Boundary curve ``which`` (1 or 2) pulled back to ``u`` in [0, 1]."""
        phi = self.phi1 if which == 1 else self.phi2
        return phi(self.interval.from_unit(u))

    def fiber(self, x: float) -> tuple[float, float]:
        return self.phi1(x), self.phi2(x)

    def transform_point(self, u: float, v: float) -> tuple[float, float]:
        """Map the unit square onto the domain."""
        for name, value in (("u", u), ("v", v)):
            if not (-DOMAIN_TOL <= value <= 1.0 + DOMAIN_TOL):
                raise DomainError(f"{name}={value!r} outside domain [0, 1]")
        x = self.interval.from_unit(u)
        lo, hi = self.fiber(x)
        return x, (hi - lo) * v + lo

    def to_parametric(self, x: float, y: float) -> tuple[float, float]:
        """Inverse of :meth:`transform_point`; raises if (x, y) is outside."""
        if not self.interval.contains(x):
            raise DomainError(
                f"point ({x!r}, {y!r}) outside domain: x not in [{self.interval.left!r}, {self.interval.right!r}]"
            )
        lo, hi = self.fiber(x)
        height = hi - lo
        if not height > 0:
            raise DomainError(f"point ({x!r}, {y!r}) outside domain: empty fiber at x (phi2 - phi1 = {height!r})")
        slack = DOMAIN_TOL * max(height, abs(lo), abs(hi), 1.0)
        if not (lo - slack <= y <= hi + slack):
            raise DomainError(f"point ({x!r}, {y!r}) outside domain: y not in [{lo!r}, {hi!r}]")
        u = min(max(self.interval.to_unit(x), 0.0), 1.0)
        v = min(max((y - lo) / height, 0.0), 1.0)
        return u, v

    def contains(self, x: float, y: float) -> bool:
        try:
            self.to_parametric(x, y)
        except DomainError:
            return False
        return True


def transform_point(dom: CurveDomain, u: float, v: float) -> tuple[float, float]:
    return dom.transform_point(u, v)


def y_step(scheme: NodeScheme, dom: CurveDomain, m: int, k: int) -> float:
    """Physical y-spacing ``1/n_k = (phi2 - phi1)(x_k) / m_k`` of node column ``k``.

    Uses the classical-frame node ``x_k = (k/m) b``.
    """
    degree = mk(scheme, m, k)
    if degree == 0:
        raise DegenerateColumnError(f"column k={k} has m_k = 0; its spacing is undefined")
    x_k = k / m * dom.b
    if not dom.interval.contains(x_k):
        raise DomainError(f"classical node x_k={x_k!r} outside domain [{dom.interval.left!r}, {dom.interval.right!r}]")
    lo, hi = dom.fiber(x_k)
    return (hi - lo) / degree
