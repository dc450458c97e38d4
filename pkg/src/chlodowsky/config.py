"""Line-oriented ``key = value`` experiment configuration.

Example::

    # Gaussian on a sine/cosine bounded domain
    operator   = shifted_stancu
    b_sequence = sqrt
    alpha      = 0
    beta       = 1
    phi1       = 0.5*sin(2*pi*x/(beta - alpha))
    phi2       = 0.5 + 0.5*cos(2*pi*x/(beta - alpha))
    g          = exp(-((x - 0.5*(alpha + beta))^2 + (y - 0.5)^2))
    scheme     = descending
    ms         = 40, 50
    grid       = 41

Every expression may refer to ``b`` (the current ``b_m``), ``alpha`` and
``beta``. Boundary curves and one-variable targets are functions of ``x``;
two-variable targets are functions of ``x`` and ``y``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from pathlib import Path

from .basis import ShiftedInterval
from .domain import CurveDomain, NodeScheme
from .errors import ConfigError, ExprError
from .expr import Expr, parse
from .univariate import ChlodowskySequence

OPERATORS = ("classical1d", "shifted1d", "stancu", "shifted_stancu", "triangle", "disk_global", "disk_piecewise")
ONE_DIMENSIONAL = ("classical1d", "shifted1d")
CURVE_OPERATORS = ("stancu", "shifted_stancu")

KEYS = (
    "operator", "b_sequence", "alpha", "beta", "phi1", "phi2", "g",
    "scheme", "ms", "grid", "output", "seed", "validate_domain",
)
DEFAULTS = {
    "b_sequence": "sqrt",
    "alpha": "0",
    "beta": "1",
    "phi1": "0",
    "phi2": "1",
    "scheme": "descending",
    "grid": "41",
    "output": "",
    "seed": "42",
    "validate_domain": "true",
}
_BOOLEANS = {"true": True, "yes": True, "on": True, "1": True, "false": False, "no": False, "off": False, "0": False}


@dataclass
class ExperimentConfig:
    operator: str
    b_sequence: ChlodowskySequence
    alpha: float
    beta: float
    phi1: Expr
    phi2: Expr
    g: Expr
    scheme: NodeScheme
    ms: list[int]
    grid: int
    output: str = ""
    seed: int = 42
    validate_domain: bool = True
    raw: dict[str, str] = field(default_factory=dict, repr=False)

    @property
    def is_1d(self) -> bool:
        return self.operator in ONE_DIMENSIONAL

    def b(self, m: int) -> float:
        return self.b_sequence(m)

    def _bind(self, expr: Expr, m: int):
        return functools.partial(expr, b=self.b(m), alpha=self.alpha, beta=self.beta)

    def target(self, m: int):
        """``g`` with ``b``, ``alpha`` and ``beta`` bound for degree ``m``."""
        return self._bind(self.g, m)

    def interval(self, m: int) -> ShiftedInterval:
        if self.operator == "classical1d":
            return ShiftedInterval(0.0, 1.0, self.b(m))
        return ShiftedInterval(self.alpha, self.beta, self.b(m))

    def domain(self, m: int) -> CurveDomain:
        return CurveDomain(
            self.interval(m),
            self._bind(self.phi1, m),
            self._bind(self.phi2, m),
            validate=self.validate_domain,
        )

    def echo(self) -> list[str]:
        """The effective configuration as ``key = value`` lines."""
        values = dict(DEFAULTS)
        values.update(self.raw)
        return [f"{key} = {values[key]}" for key in KEYS if key in values]


def parse_config_text(text: str) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'", key or None)
        if key not in KEYS:
            raise ConfigError(f"unknown key on line {lineno}; valid keys: {', '.join(KEYS)}", key)
        if key in raw:
            raise ConfigError(f"duplicate key on line {lineno}", key)
        raw[key] = value.strip()
    return build_config(raw)


def _expr(raw, key, variables):
    try:
        return parse(raw[key], variables)
    except ExprError as exc:
        raise ConfigError(str(exc), key) from exc


def build_config(raw: dict[str, str]) -> ExperimentConfig:
    values = dict(DEFAULTS)
    values.update(raw)
    for required in ("operator", "g", "ms"):
        if not values.get(required):
            raise ConfigError("missing required key", required)

    operator = values["operator"]
    if operator not in OPERATORS:
        raise ConfigError(f"unknown operator {operator!r}; valid operators: {', '.join(OPERATORS)}", "operator")

    try:
        sequence = ChlodowskySequence.parse(values["b_sequence"])
    except ValueError as exc:
        raise ConfigError(str(exc), "b_sequence") from exc

    numbers = {}
    for key in ("alpha", "beta"):
        try:
            numbers[key] = float(values[key])
        except ValueError:
            raise ConfigError(f"not a number: {values[key]!r}", key) from None
    if not numbers["alpha"] < numbers["beta"]:
        raise ConfigError(f"alpha must be less than beta (got {numbers['alpha']} >= {numbers['beta']})", "alpha")
    if operator == "stancu" and (numbers["alpha"], numbers["beta"]) != (0.0, 1.0):
        raise ConfigError("the stancu operator lives on [0, b]; use alpha = 0, beta = 1", "alpha")

    try:
        scheme = NodeScheme.parse(values["scheme"])
    except ValueError as exc:
        raise ConfigError(str(exc), "scheme") from exc

    try:
        ms = [int(part) for part in values["ms"].replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"expected integers, got {values['ms']!r}", "ms") from None
    if not ms:
        raise ConfigError("must list at least one degree", "ms")
    if any(m < 1 for m in ms):
        raise ConfigError("degrees must be >= 1", "ms")
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise ConfigError("degrees must be strictly ascending", "ms")

    try:
        grid = int(values["grid"])
        seed = int(values["seed"])
    except ValueError as exc:
        raise ConfigError(str(exc), "grid" if "grid" in str(exc) else "seed") from None
    if grid < 2:
        raise ConfigError("must be >= 2", "grid")

    flag = values["validate_domain"].lower()
    if flag not in _BOOLEANS:
        raise ConfigError(f"expected true/false, got {values['validate_domain']!r}", "validate_domain")

    shared = ("b", "alpha", "beta")
    g_vars = ("x",) + shared if operator in ONE_DIMENSIONAL else ("x", "y") + shared
    return ExperimentConfig(
        operator=operator,
        b_sequence=sequence,
        alpha=numbers["alpha"],
        beta=numbers["beta"],
        phi1=_expr(values, "phi1", ("x",) + shared),
        phi2=_expr(values, "phi2", ("x",) + shared),
        g=_expr(values, "g", g_vars),
        scheme=scheme,
        ms=ms,
        grid=grid,
        output=values["output"],
        seed=seed,
        validate_domain=_BOOLEANS[flag],
        raw=dict(raw),
    )


def load_config(path) -> ExperimentConfig:
    """Read and validate a config file; every expression is parsed here."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_config_text(text)
