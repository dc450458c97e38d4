"""Command-line experiment runner.

Subcommands::

    chlodowsky eval     --config C [--m N] --x X [--y Y]
    chlodowsky moments  --config C [--out PATH]
    chlodowsky converge --config C [--out PATH] [--timing]
    chlodowsky surface  --config C [--m N] [--out PATH]

Exit status is 0 on success, 1 for invalid input or a point outside the
domain, 2 for I/O failures and 3 when a moment check exceeds its threshold.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
import time
from dataclasses import dataclass
from typing import Callable, Sequence, TextIO

import numpy as np

from . import geometry
from .bivariate import (
    ErrorReport,
    classical_node_columns,
    evaluate_parametric,
    moment_y,
    moment_y2,
    node_columns,
    parametric_grid,
    shifted_stancu_operator,
    stancu_operator,
)
from .config import CURVE_OPERATORS, ExperimentConfig, load_config
from .errors import ChlodowskyError, ConfigError, EvaluationError
from .univariate import moment, shifted_operator, shifted_operator_grid

MOMENT_THRESHOLD = 1e-8
MOMENT_OPERATORS = ("classical1d", "shifted1d", "stancu", "shifted_stancu")

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_THRESHOLD = 0, 1, 2, 3


def fmt(value: float) -> str:
    return f"{value:.17g}"


@dataclass
class Sample:
    """Grid points of one operator instance with exact and approximated values."""

    u: np.ndarray
    v: np.ndarray
    x: np.ndarray
    y: np.ndarray
    exact: np.ndarray
    approx: np.ndarray

    @property
    def abs_error(self) -> np.ndarray:
        return np.abs(self.exact - self.approx)


def _located(g: Callable, m: int) -> Callable:
    """Wrap ``g`` so evaluation failures name the degree and the point."""

    def wrapped(*point):
        try:
            return g(*point)
        except EvaluationError as exc:
            where = ", ".join(fmt(p) for p in point)
            raise EvaluationError(f"m={m}, point=({where}): {exc}") from exc

    return wrapped


def _exact_values(g, m, u, v, xs, ys, one_d):
    out = np.empty(len(u))
    for i in range(len(u)):
        try:
            out[i] = g(xs[i]) if one_d else g(xs[i], ys[i])
        except EvaluationError as exc:
            raise EvaluationError(f"m={m}, u={fmt(u[i])}, v={fmt(v[i])}: {exc}") from exc
    return out


def sample(cfg: ExperimentConfig, m: int, grid: int | None = None) -> Sample:
    """Evaluate target and operator on the configured grid for degree ``m``.

    One-variable operators use ``grid`` equispaced points (``v = y = 0``).
    Two-variable operators use the row-major ``grid x grid`` parametric
    square; the disk operators are sampled through the global disk map.
    """
    n = cfg.grid if grid is None else grid
    g = _located(cfg.target(m), m)
    b = cfg.b(m)
    if cfg.is_1d:
        interval = cfg.interval(m)
        u = np.linspace(0.0, 1.0, n)
        v = np.zeros(n)
        xs = interval.from_unit(u)
        ys = np.zeros(n)
        exact = _exact_values(g, m, u, v, xs, ys, True)
        return Sample(u, v, xs, ys, exact, shifted_operator_grid(g, m, interval, xs))

    u, v = parametric_grid(n)
    if cfg.operator in CURVE_OPERATORS:
        dom = cfg.domain(m)
        points = [dom.transform_point(float(a), float(c)) for a, c in zip(u, v)]
        build = classical_node_columns if cfg.operator == "stancu" else node_columns
        approx = evaluate_parametric(build(g, m, dom, cfg.scheme), m, cfg.scheme, u, v)
    elif cfg.operator == "triangle":
        points = [geometry.square_to_triangle(float(a), float(c), b) for a, c in zip(u, v)]
        approx = geometry.triangle_grid(g, m, b, u, v)
    else:
        points = [geometry.square_to_disk_global(float(a), float(c), b) for a, c in zip(u, v)]
        if cfg.operator == "disk_global":
            approx = geometry.disk_global_grid(g, m, cfg.scheme, b, u, v)
        else:
            approx = geometry.disk_piecewise_grid(g, m, b, [p[0] for p in points], [p[1] for p in points])
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    exact = _exact_values(g, m, u, v, xs, ys, False)
    return Sample(u, v, xs, ys, exact, approx)


def _header(cfg: ExperimentConfig, command: str) -> list[str]:
    return [f"# chlodowsky {command}"] + [f"# {line}" for line in cfg.echo()]


def trend_verdict(values: Sequence[float]) -> str:
    if len(values) < 2:
        return "trend: single degree, no trend"
    rises = [i + 1 for i in range(len(values) - 1) if not values[i + 1] < values[i]]
    if not rises:
        return "trend: strictly decreasing"
    return "trend: not strictly decreasing (no decrease at positions " + ", ".join(map(str, rises)) + ")"


def run_converge(cfg: ExperimentConfig, timing: bool = False) -> tuple[list[ErrorReport], str]:
    """One :class:`ErrorReport` per degree plus the CSV text.

    ``seconds`` is 0 unless ``timing`` is set, which keeps the output
    byte-identical across runs.
    """
    reports = []
    for m in cfg.ms:
        start = time.perf_counter()
        data = sample(cfg, m)
        err = data.abs_error
        reports.append(
            ErrorReport(
                m=m,
                sup_error=float(np.max(err)),
                mean_error=float(np.mean(err)),
                grid_n=cfg.grid,
                scheme=None if cfg.is_1d else cfg.scheme,
                b=cfg.b(m),
                seconds=time.perf_counter() - start if timing else 0.0,
            )
        )
    lines = _header(cfg, "converge") + ["m,b_m,sup_error,mean_error,grid,seconds"]
    for r in reports:
        lines.append(f"{r.m},{fmt(r.b)},{fmt(r.sup_error)},{fmt(r.mean_error)},{r.grid_n},{fmt(r.seconds)}")
    lines.append("# " + trend_verdict([r.sup_error for r in reports]))
    return reports, "\n".join(lines) + "\n"


def run_surface(cfg: ExperimentConfig, m: int | None = None) -> tuple[Sample, str]:
    degree = cfg.ms[-1] if m is None else m
    data = sample(cfg, degree)
    lines = _header(cfg, "surface") + [f"# m = {degree}", f"# b_m = {fmt(cfg.b(degree))}", "u,v,x,y,g,Bg,abs_error"]
    for row in zip(data.u, data.v, data.x, data.y, data.exact, data.approx, data.abs_error):
        lines.append(",".join(fmt(float(value)) for value in row))
    return data, "\n".join(lines) + "\n"


def moment_deviations(cfg: ExperimentConfig, m: int) -> dict[str, float]:
    """Largest deviation between operator-applied monomials and their closed forms."""
    if cfg.operator not in MOMENT_OPERATORS:
        raise ConfigError(
            f"operator {cfg.operator!r} has no closed-form moments; use one of {', '.join(MOMENT_OPERATORS)}",
            "operator",
        )
    if cfg.is_1d:
        interval = cfg.interval(m)
        xs = interval.from_unit(np.linspace(0.0, 1.0, cfg.grid))
        out = {}
        for j in range(3):
            approx = shifted_operator_grid(lambda x, j=j: x**j, m, interval, xs)
            exact = np.array([moment(j, m, interval, float(x)) for x in xs])
            out[f"x^{j}"] = float(np.max(np.abs(approx - exact)))
        return out

    dom = cfg.domain(m)
    scheme = cfg.scheme
    u, v = parametric_grid(cfg.grid)
    points = [dom.transform_point(float(a), float(c)) for a, c in zip(u, v)]
    interval = dom.interval
    build = classical_node_columns if cfg.operator == "stancu" else node_columns

    def apply(g):
        return evaluate_parametric(build(g, m, dom, scheme), m, scheme, u, v)

    xs = np.array([p[0] for p in points])
    out = {
        "1": float(np.max(np.abs(apply(lambda x, y: 1.0) - 1.0))),
        "x": float(np.max(np.abs(apply(lambda x, y: x) - xs))),
        "x^2": float(np.max(np.abs(apply(lambda x, y: x * x) - np.array([moment(2, m, interval, x) for x in xs])))),
    }
    if dom.validated:
        # the y closed forms invert the domain map, which folded domains do not allow
        for name, power, closed in (("y", 1, moment_y), ("y^2", 2, moment_y2)):
            exact = np.array([closed(dom, m, scheme, x, y) for x, y in points])
            out[name] = float(np.max(np.abs(apply(lambda x, y, p=power: y**p) - exact)))
    return out


def run_moments(cfg: ExperimentConfig) -> tuple[bool, str, str]:
    """``(all within threshold, report text, CSV text)``."""
    lines = _header(cfg, "moments") + [f"# threshold = {MOMENT_THRESHOLD:g}", "m,b_m,moment,max_deviation"]
    report = []
    ok = True
    for m in cfg.ms:
        devs = moment_deviations(cfg, m)
        worst = max(devs.values())
        passed = worst <= MOMENT_THRESHOLD
        ok = ok and passed
        for name, dev in devs.items():
            lines.append(f"{m},{fmt(cfg.b(m))},{name},{fmt(dev)}")
        status = "ok" if passed else "FAIL"
        report.append(f"m={m} b_m={cfg.b(m):.6g} worst deviation {worst:.3e} [{status}]")
    return ok, "\n".join(report) + "\n", "\n".join(lines) + "\n"


def run_eval(cfg: ExperimentConfig, x: float, y: float | None = None, m: int | None = None) -> float:
    degree = cfg.ms[-1] if m is None else m
    g = _located(cfg.target(degree), degree)
    b = cfg.b(degree)
    if not cfg.is_1d and y is None:
        raise ConfigError(f"operator {cfg.operator!r} needs a y coordinate", "y")
    if cfg.is_1d:
        return shifted_operator(g, degree, cfg.interval(degree), x)
    if cfg.operator == "stancu":
        return stancu_operator(g, degree, cfg.domain(degree), cfg.scheme, x, y)
    if cfg.operator == "shifted_stancu":
        return shifted_stancu_operator(g, degree, cfg.domain(degree), cfg.scheme, x, y)
    if cfg.operator == "triangle":
        u, v = geometry.triangle_to_square(x, y, b)
        return geometry.triangle_operator(g, degree, b, u, v)
    if cfg.operator == "disk_global":
        return geometry.disk_operator_global(g, degree, cfg.scheme, b, x, y)
    return geometry.disk_operator_piecewise(g, degree, b, x, y)


@contextlib.contextmanager
def _open_output(path: str | None, stdout: TextIO):
    if not path:
        yield stdout
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        yield handle


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chlodowsky", description="Bernstein-Chlodowsky operator experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("eval", "evaluate the operator at one point"),
        ("moments", "check closed-form moment identities"),
        ("converge", "sup and mean grid error per degree"),
        ("surface", "export grid data for plotting"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--m", type=int, help="degree (defaults to the last entry of ms)")
        p.add_argument("--out", help="output path (defaults to the config's output, else stdout)")
        if name == "eval":
            p.add_argument("--x", type=float, required=True)
            p.add_argument("--y", type=float)
        if name == "converge":
            p.add_argument("--timing", action="store_true", help="record wall-clock seconds per degree")
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.m is not None and args.m < 1:
            raise ConfigError("degree must be >= 1", "m")
        out_path = getattr(args, "out", None) or cfg.output or None
        if args.command == "eval":
            print(fmt(run_eval(cfg, args.x, args.y, args.m)), file=stdout)
            return EXIT_OK
        if args.command == "moments":
            if args.m is not None:
                cfg.ms = [args.m]
            ok, report, csv = run_moments(cfg)
            with _open_output(out_path, stdout) as handle:
                handle.write(csv)
            stderr.write(report)
            return EXIT_OK if ok else EXIT_THRESHOLD
        if args.command == "converge":
            if args.m is not None:
                cfg.ms = [args.m]
            _, csv = run_converge(cfg, timing=args.timing)
        else:
            _, csv = run_surface(cfg, args.m)
        with _open_output(out_path, stdout) as handle:
            handle.write(csv)
        return EXIT_OK
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    except (ChlodowskyError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
