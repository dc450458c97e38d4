"""Classical and shifted univariate Bernstein-Chlodowsky operators."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basis import DOMAIN_TOL, ShiftedInterval, bernstein_all
from .errors import DomainError

Func1D = Callable[[float], float]


class SequenceKind(enum.Enum):
    SQRT = "sqrt"
    LOG = "log"
    POWER = "power"
    CONSTANT = "const"


@dataclass(frozen=True)
class ChlodowskySequence:
    """The scale sequence ``b_m`` that stretches the interval with ``m``.

    ``SQRT`` gives sqrt(m), ``LOG`` ln(m+2), ``POWER`` m**param with
    0 < param < 1, ``CONSTANT`` the fixed value ``param``.
    """

    kind: SequenceKind = SequenceKind.SQRT
    param: float | None = None

    def __post_init__(self):
        if self.kind is SequenceKind.POWER:
            if self.param is None or not 0.0 < self.param < 1.0:
                raise ValueError(f"power exponent must lie in (0, 1), got {self.param}")
        elif self.kind is SequenceKind.CONSTANT:
            if self.param is None or not self.param > 0:
                raise ValueError(f"constant sequence needs a positive value, got {self.param}")

    @classmethod
    def parse(cls, text: str) -> ChlodowskySequence:
        """Parse ``sqrt``, ``log``, ``power:0.5`` or ``const:2``."""
        name, _, arg = text.strip().partition(":")
        try:
            kind = SequenceKind(name.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in SequenceKind)
            raise ValueError(f"unknown sequence {name!r}; expected one of {valid}") from None
        if kind in (SequenceKind.POWER, SequenceKind.CONSTANT):
            if not arg:
                raise ValueError(f"sequence {kind.value!r} needs a parameter, e.g. {kind.value}:0.5")
            return cls(kind, float(arg))
        if arg:
            raise ValueError(f"sequence {kind.value!r} takes no parameter")
        return cls(kind)

    def __str__(self):
        if self.param is None:
            return self.kind.value
        return f"{self.kind.value}:{self.param:g}"

    def __call__(self, m: int) -> float:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        if self.kind is SequenceKind.SQRT:
            return math.sqrt(m)
        if self.kind is SequenceKind.LOG:
            return math.log(m + 2)
        if self.kind is SequenceKind.POWER:
            return float(m) ** self.param
        return float(self.param)

    def validate(self, m_max: int = 10**6) -> None:
        """Numerically check positivity, monotonicity and ``b_m/m -> 0``."""
        ms = np.unique(np.geomspace(1, m_max, 200).astype(int))
        values = np.array([self(int(m)) for m in ms])
        if np.any(values <= 0):
            raise ValueError(f"sequence {self} is not positive")
        if self.kind is SequenceKind.CONSTANT:
            return
        if np.any(np.diff(values) < 0):
            raise ValueError(f"sequence {self} is not nondecreasing")
        # m**p with p close to 1 decays slowly, so only ask for a decreasing tail
        ratio = values / ms
        if np.any(np.diff(ratio[len(ratio) // 2:]) >= 0) or not ratio[-1] < ratio[0]:
            raise ValueError(f"sequence {self} does not satisfy b_m/m -> 0")


def _check_point(x: float, left: float, right: float) -> None:
    slack = DOMAIN_TOL * (right - left)
    if not (left - slack <= x <= right + slack):
        raise DomainError(f"x={x!r} outside domain [{left!r}, {right!r}]")


def classical_operator(g: Func1D, m: int, b: float, x: float) -> float:
    """Bernstein-Chlodowsky operator on ``[0, b]`` at a single point."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    _check_point(x, 0.0, b)
    values = np.array([g(k * b / m) for k in range(m + 1)], dtype=float)
    return float(bernstein_all(m, min(max(x / b, 0.0), 1.0)) @ values)


def node_values(g: Func1D, m: int, interval: ShiftedInterval) -> np.ndarray:
    return np.array([g(float(node)) for node in interval.nodes(m)], dtype=float)


def shifted_operator(g: Func1D, m: int, interval: ShiftedInterval, x: float) -> float:
    """Shifted operator on ``interval`` at a single point ``x``."""
    return float(shifted_operator_grid(g, m, interval, np.array([x]))[0])


def shifted_operator_grid(g: Func1D, m: int, interval: ShiftedInterval, xs, values=None) -> np.ndarray:
    """Shifted operator at every point of ``xs``.

    ``g`` is sampled once at the ``m+1`` nodes; pass precomputed node
    ``values`` to skip even that.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    xs = np.asarray(xs, dtype=float)
    slack = DOMAIN_TOL * interval.width
    outside = (xs < interval.left - slack) | (xs > interval.right + slack)
    if np.any(outside):
        bad = float(xs[outside].ravel()[0])
        raise DomainError(f"x={bad!r} outside domain [{interval.left!r}, {interval.right!r}]")
    if values is None:
        values = node_values(g, m, interval)
    return bernstein_all(m, interval.to_unit(xs)) @ values


def moment(j: int, m: int, interval: ShiftedInterval, x: float) -> float:
    """Closed-form image of the monomial ``x**j`` (j <= 2) under the shifted operator."""
    if j not in (0, 1, 2):
        raise ValueError(f"unsupported moment order {j}; only 0, 1, 2 are available")
    _check_point(x, interval.left, interval.right)
    if j == 0:
        return 1.0
    if j == 1:
        return float(x)
    return x * x + (x - interval.left) * (interval.right - x) / m


def sup_error(g: Func1D, m: int, interval: ShiftedInterval, grid_n: int = 101) -> float:
    """Max of ``|g - B g|`` over a closed equispaced grid on the interval."""
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    xs = np.linspace(interval.left, interval.right, grid_n)
    approx = shifted_operator_grid(g, m, interval, xs)
    exact = np.array([g(float(x)) for x in xs])
    return float(np.max(np.abs(exact - approx)))
