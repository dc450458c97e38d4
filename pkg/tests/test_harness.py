import io
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from chlodowsky.config import load_config, parse_config_text
from chlodowsky.domain import NodeScheme
from chlodowsky.errors import ConfigError, ExprSyntaxError
from chlodowsky.harness import main, run_converge, run_eval, run_moments, run_surface, trend_verdict
from chlodowsky.univariate import SequenceKind

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def run(args):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in args], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def read_csv(text):
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    header = rows[0].split(",")
    return header, [dict(zip(header, map(float, row.split(",")))) for row in rows[1:]]


class TestConfig:
    def test_sine_cosine_region(self):
        cfg = load_config(CONFIGS / "figure3.cfg")
        assert cfg.operator == "shifted_stancu"
        assert cfg.b_sequence.kind is SequenceKind.SQRT
        assert cfg.ms == [40, 50]
        assert cfg.grid == 41 and cfg.seed == 42
        assert cfg.scheme is NodeScheme.DESCENDING
        assert cfg.phi1(0.25, b=7.0, alpha=0.0, beta=1.0) == pytest.approx(0.5)

    def test_alpha_not_below_beta(self):
        with pytest.raises(ConfigError) as info:
            parse_config_text("operator = shifted1d\ng = x\nms = 4\nalpha = 1\nbeta = 1")
        assert info.value.key == "alpha"

    def test_unknown_operator_lists_choices(self):
        with pytest.raises(ConfigError, match="disk_piecewise") as info:
            parse_config_text("operator = hexagon\ng = x\nms = 4")
        assert info.value.key == "operator"

    @pytest.mark.parametrize(
        "text, key",
        [
            ("operator = shifted1d\nms = 4", "g"),
            ("operator = shifted1d\ng = x\nms = 4, 2", "ms"),
            ("operator = shifted1d\ng = x\nms = ", "ms"),
            ("operator = shifted1d\ng = x\nms = 0", "ms"),
            ("operator = shifted1d\ng = x\nms = 4\ngrid = 1", "grid"),
            ("operator = shifted1d\ng = x\nms = 4\nscheme = zigzag", "scheme"),
            ("operator = shifted1d\ng = x\nms = 4\nb_sequence = linear", "b_sequence"),
            ("operator = shifted1d\ng = x\nms = 4\ncolour = red", "colour"),
            ("operator = shifted1d\ng = x\nms = 4\nms = 5", "ms"),
            ("operator = stancu\ng = x\nms = 4\nalpha = 0.5\nbeta = 2", "alpha"),
            ("operator = shifted1d\ng = x\nms = 4\nvalidate_domain = maybe", "validate_domain"),
        ],
    )
    def test_validation_names_key(self, text, key):
        with pytest.raises(ConfigError) as info:
            parse_config_text(text)
        assert info.value.key == key
        assert key in str(info.value)

    def test_expression_errors_surface_at_load(self):
        with pytest.raises(ConfigError, match="offset") as info:
            parse_config_text("operator = shifted_stancu\ng = x + * y\nms = 4")
        assert info.value.key == "g"
        assert isinstance(info.value.__cause__, ExprSyntaxError)
        with pytest.raises(ConfigError, match="'y'"):
            parse_config_text("operator = shifted1d\ng = x + y\nms = 4")

    def test_missing_separator(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_text("operator = shifted1d\njust words\n")

    def test_comments_and_echo(self):
        cfg = parse_config_text("# header\n\noperator = shifted1d  \n g = x^2\nms = 3 5\n")
        assert cfg.ms == [3, 5]
        assert "g = x^2" in cfg.echo()
        assert "seed = 42" in cfg.echo()

    @pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.cfg")), ids=lambda p: p.name)
    def test_shipped_configs_load(self, path):
        load_config(path)


class TestEval:
    def test_linear_reproduced(self, tmp_path):
        path = write(tmp_path, "operator = shifted1d\nalpha = 0.5\nbeta = 2\ng = x\nms = 7\n")
        code, out, _ = run(["eval", "--config", path, "--x", "2.25"])
        assert code == 0
        assert float(out) == pytest.approx(2.25, abs=1e-14)

    def test_stancu_constant(self, tmp_path):
        path = write(tmp_path, "operator = stancu\nphi1 = -1\nphi2 = 1 + x\ng = 1\nms = 6\n")
        code, out, _ = run(["eval", "--config", path, "--x", "1.0", "--y", "0.5"])
        assert code == 0 and float(out) == pytest.approx(1.0, abs=1e-14)

    def test_outside_domain(self, tmp_path):
        path = write(tmp_path, "operator = stancu\nphi1 = -1\nphi2 = 1\ng = 1\nms = 6\n")
        code, _, err = run(["eval", "--config", path, "--x", "1.0", "--y", "3.0"])
        assert code == 1 and "outside domain" in err

    def test_every_operator(self, tmp_path):
        for operator, point in [
            ("classical1d", (0.5, None)),
            ("triangle", (0.2, 0.9)),
            ("disk_global", (0.3, -0.4)),
            ("disk_piecewise", (-0.3, -0.4)),
            ("shifted_stancu", (0.5, 0.5)),
        ]:
            g = "1" if operator.endswith("1d") else "1 + 0*y"
            cfg = parse_config_text(f"operator = {operator}\ng = {g}\nms = 5\n")
            assert run_eval(cfg, *point) == pytest.approx(1.0, abs=1e-12)

    def test_needs_y(self, tmp_path):
        path = write(tmp_path, "operator = triangle\ng = y\nms = 3\n")
        code, _, err = run(["eval", "--config", path, "--x", "0.0"])
        assert code == 1 and "y" in err


class TestConverge:
    def test_constant_target(self, tmp_path):
        path = write(tmp_path, "operator = shifted_stancu\nphi1 = sin(x) - 2\nphi2 = 1\ng = 1\nms = 3, 9, 27\ngrid = 11\n")
        code, out, _ = run(["converge", "--config", path])
        header, rows = read_csv(out)
        assert code == 0
        assert header == ["m", "b_m", "sup_error", "mean_error", "grid", "seconds"]
        assert [r["m"] for r in rows] == [3, 9, 27]
        assert all(r["sup_error"] <= 1e-10 for r in rows)
        assert out.rstrip().splitlines()[-1].startswith("# trend:")

    def test_quadratic_error_is_closed_form(self, tmp_path):
        alpha, beta = 0.25, 1.75
        path = write(tmp_path, f"operator = shifted1d\nalpha = {alpha}\nbeta = {beta}\ng = x^2\nms = 2, 5, 13\ngrid = 101\n")
        reports, _ = run_converge(load_config(path))
        for r in reports:
            b = math.sqrt(r.m)
            xs = np.linspace(alpha * b, beta * b, 101)
            expected = np.max((xs - alpha * b) * (beta * b - xs) / r.m)
            assert r.sup_error == pytest.approx(expected, abs=1e-9)

    def test_b_follows_sequence(self, tmp_path):
        path = write(tmp_path, "operator = shifted1d\nb_sequence = power:0.5\ng = x\nms = 4, 9\n")
        _, out, _ = run(["converge", "--config", path])
        _, rows = read_csv(out)
        assert [r["b_m"] for r in rows] == [2.0, 3.0]

    def test_evaluation_error_is_located(self, tmp_path):
        path = write(tmp_path, "operator = shifted1d\ng = log(x)\nms = 4\n")
        code, _, err = run(["converge", "--config", path])
        assert code == 1 and "m=4" in err

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(["converge", "--config", CONFIGS / "stancu.cfg", "--out", a])[0] == 0
        assert run(["converge", "--config", CONFIGS / "stancu.cfg", "--out", b])[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_timing_flag(self, tmp_path):
        path = write(tmp_path, "operator = shifted1d\ng = x\nms = 4\n")
        _, out, _ = run(["converge", "--config", path, "--timing"])
        assert read_csv(out)[1][0]["seconds"] > 0

    def test_verdicts(self):
        assert trend_verdict([3, 2, 1]) == "trend: strictly decreasing"
        assert "not strictly" in trend_verdict([3, 3, 1])
        assert "single" in trend_verdict([1])


class TestSurface:
    def test_shape_and_order(self, tmp_path):
        path = write(tmp_path, "operator = triangle\ng = 1\nms = 6\ngrid = 5\n")
        code, out, _ = run(["surface", "--config", path])
        header, rows = read_csv(out)
        assert code == 0
        assert header == ["u", "v", "x", "y", "g", "Bg", "abs_error"]
        assert len(rows) == 25
        assert [(r["u"], r["v"]) for r in rows[:6]] == [(0, 0), (0, 0.25), (0, 0.5), (0, 0.75), (0, 1), (0.25, 0)]
        assert all(abs(r["Bg"] - 1) <= 1e-10 for r in rows)

    def test_figure_two_shape(self, tmp_path):
        cfg = load_config(CONFIGS / "figure2.cfg")
        data, _ = run_surface(cfg)
        b = math.sqrt(20)
        assert len(data.u) == 41 * 41
        assert np.all(data.x**2 + data.y**2 <= b * b * (1 + 1e-12))

    def test_matches_converge(self):
        cfg = load_config(CONFIGS / "figure3.cfg")
        reports, _ = run_converge(cfg)
        data, text = run_surface(cfg, 50)
        assert float(np.max(data.abs_error)) == reports[-1].sup_error
        _, rows = read_csv(text)
        assert max(r["abs_error"] for r in rows) == reports[-1].sup_error

    def test_digits(self):
        cfg = load_config(CONFIGS / "figure3.cfg")
        _, text = run_surface(cfg, 5)
        row = [line for line in text.splitlines() if not line.startswith("#")][10]
        assert all(float(repr(float(cell))) == float(cell) for cell in row.split(","))

    def test_unwritable_output(self, tmp_path):
        code, _, err = run(["surface", "--config", CONFIGS / "figure1.cfg", "--out", tmp_path / "missing" / "x.csv"])
        assert code == 2 and "error" in err


class TestMoments:
    def test_univariate(self, tmp_path):
        path = write(tmp_path, "operator = shifted1d\nalpha = -0.7\nbeta = 1.9\nb_sequence = const:3.3\ng = 1\nms = 20\ngrid = 101\n")
        ok, report, csv = run_moments(load_config(path))
        assert ok and "[ok]" in report
        _, rows = read_csv(csv.replace(",x^0,", ",0,").replace(",x^1,", ",1,").replace(",x^2,", ",2,"))
        assert len(rows) == 3 and all(r["max_deviation"] < 1e-10 for r in rows)

    def test_affine_boundaries(self):
        ok, _, csv = run_moments(load_config(CONFIGS / "affine_moments.cfg"))
        assert ok
        lines = [line for line in csv.splitlines() if ",y," in line]
        assert lines and all(float(line.split(",")[-1]) < 1e-9 for line in lines)
        assert all(float(line.split(",")[-1]) < 1e-12 for line in csv.splitlines() if ",x," in line)

    def test_unsupported(self):
        code, _, err = run(["moments", "--config", CONFIGS / "figure2.cfg"])
        assert code == 1 and "closed-form" in err

    def test_threshold_exit(self, tmp_path, monkeypatch):
        import chlodowsky.harness as harness

        monkeypatch.setattr(harness, "MOMENT_THRESHOLD", 0.0)
        path = write(tmp_path, "operator = shifted1d\ng = 1\nms = 7\nb_sequence = const:3\nalpha = 0.1\nbeta = 0.7\n")
        code, _, err = run(["moments", "--config", path])
        assert code == 3 and "FAIL" in err


def test_missing_config_is_io_error(tmp_path):
    code, _, err = run(["converge", "--config", tmp_path / "nope.cfg"])
    assert code == 2


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.cfg")), ids=lambda p: p.name)
def test_shipped_configs_run_quickly(path, tmp_path):
    for command in ("converge", "surface"):
        start = time.perf_counter()
        code, _, _ = run([command, "--config", path, "--out", tmp_path / "out.csv"])
        assert code == 0
        assert time.perf_counter() - start < 60


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "operator = shifted1d\ng = x\nms = 3\n")
    done = subprocess.run(
        [sys.executable, "-m", "chlodowsky", "eval", "--config", str(path), "--x", "0.5"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert done.returncode == 0 and float(done.stdout) == pytest.approx(0.5)
