import csv
import io
import json
import subprocess
import sys

import pytest

from symcone.cli import main, parse_grid, UsageError


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def report_from(stdout: str) -> dict:
    return json.loads(stdout[stdout.index("{"):])


class TestVerify:
    def test_gamma_lorentz(self, capsys):
        code, out, _ = run(["verify", "gamma", "--cone", "lorentz:3", "--s", "2,1.5", "--tol", "1e-3"], capsys)
        rep = report_from(out)
        assert code == 0 and rep["passed"]
        assert abs(rep["cases"][0]["computed"] - 2.5066) < 1e-3
        assert set(rep) >= {"suite", "config", "cases", "passed", "wall_time"}
        assert rep["passed"] == all(c["pass"] for c in rep["cases"])

    def test_box_symbol(self, capsys):
        code, out, _ = run(["verify", "box", "--cone", "lorentz:3", "--xi", "2,1,0"], capsys)
        rep = report_from(out)
        assert code == 0 and rep["cases"][0]["expected"] == 3

    def test_convergence_violation_is_config_error(self, capsys):
        code, _, err = run(["verify", "gamma", "--cone", "lorentz:3", "--s", "1,0.4"], capsys)
        assert code == 2 and "convergence violation" in err

    def test_unknown_suite_is_usage_error(self, capsys):
        assert run(["verify", "nosuch"], capsys)[0] == 2

    def test_unknown_parameter_is_config_error(self, capsys):
        assert run(["verify", "gamma", "--colour", "red"], capsys)[0] == 2

    def test_failing_suite_exits_one(self, capsys):
        # a tolerance no quadrature can meet
        assert run(["verify", "gamma", "--cone", "lorentz:3", "--tol", "1e-15"], capsys)[0] == 1

    def test_deterministic_json(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert run(["verify", "laplace", "--cone", "lorentz:3", "--out", str(p)], capsys)[0] == 0
        a, b = (json.loads(p.read_text()) for p in paths)
        a.pop("wall_time"), b.pop("wall_time")
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_report_round_trip(self, tmp_path, capsys):
        p = tmp_path / "r.json"
        run(["verify", "pw-identity", "--out", str(p)], capsys)
        rep = json.loads(p.read_text())
        assert json.loads(json.dumps(rep)) == rep
        assert all("quadrature" in c or "computed" in c for c in rep["cases"])

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "c.txt"
        cfg.write_text("# gamma on the Lorentz cone\ncone = lorentz:3\ns = 2,1.5\n")
        code, out, _ = run(["verify", "gamma", "--config", str(cfg)], capsys)
        assert code == 0 and report_from(out)["config"]["cone"] == "lorentz:3"

    def test_command_line_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "c.txt"
        cfg.write_text("s = 1,0.4\n")
        code, _, _ = run(["verify", "gamma", "--cone", "lorentz:3", "--config", str(cfg), "--s", "2,1.5"], capsys)
        assert code == 0


class TestSweep:
    def test_lemma42_brackets_boundary(self, capsys):
        code, out, _ = run(["sweep", "lemma4-2", "--grid", "beta=-3;-1.5;-0.5;0.5"], capsys)
        rows = list(csv.DictReader(io.StringIO(out.split("sweep ")[0])))
        assert code == 0
        assert list(rows[0]) == ["beta", "ratio", "drift", "pass", "domain_ok", "error"]
        # s = 1: convergent for s + beta < 0
        assert [r["domain_ok"] for r in rows] == ["True", "True", "False", "False"]

    def test_range_grid_and_csv_file(self, tmp_path, capsys):
        p = tmp_path / "g.csv"
        code, _, _ = run(["sweep", "gamma", "--grid", "s=1:3:3", "--csv", str(p)], capsys)
        rows = list(csv.DictReader(p.open()))
        assert code == 0 and [r["s"] for r in rows] == ["1", "2", "3"]

    def test_two_axes(self, capsys):
        code, out, _ = run(["sweep", "beta", "--grid", "p=2;3", "--grid", "q=2;3"], capsys)
        assert code == 0 and len(out.split("sweep ")[0].strip().splitlines()) == 5

    @pytest.mark.parametrize("grid", ["beta=", "beta=;", "=1;2", "beta=1:2"])
    def test_bad_grids(self, grid, capsys):
        assert run(["sweep", "lemma4-2", "--grid", grid], capsys)[0] == 2

    def test_missing_grid(self, capsys):
        assert run(["sweep", "lemma4-2"], capsys)[0] == 2

    def test_parse_grid(self):
        assert parse_grid("nu=1:2:3") == ("nu", ["1", "1.5", "2"])
        assert parse_grid("s=1,2;3,4") == ("s", ["1,2", "3,4"])
        with pytest.raises(UsageError):
            parse_grid("nu")


class TestAlgebra:
    @pytest.mark.parametrize(
        "argv,expected",
        [
            (["det", "--cone", "lorentz:3", "--x", "2,1,0"], "3"),
            (["inverse", "--cone", "halfline", "--x", "4"], "0.25"),
            (["spectral", "--cone", "lorentz:3", "--x", "2,1,0"], "lambda=3,1"),
            (["power", "--cone", "lorentz:3", "--x", "2,1,0", "--s", "1,1"], "3"),
        ],
    )
    def test_values(self, argv, expected, capsys):
        code, out, _ = run(["algebra", *argv], capsys)
        assert code == 0 and out.splitlines()[0] == expected

    def test_wrong_dimension(self, capsys):
        assert run(["algebra", "det", "--cone", "lorentz:3", "--x", "1,2"], capsys)[0] == 2

    def test_power_outside_cone(self, capsys):
        assert run(["algebra", "power", "--cone", "lorentz:3", "--x", "1,2,0", "--s", "1,1"], capsys)[0] == 2


def test_list_names_every_suite(capsys):
    code, out, _ = run(["list"], capsys)
    names = [line.split()[0] for line in out.splitlines()]
    assert code == 0 and len(names) == 21 and "embedding-thm12" in names


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symcone", "algebra", "det", "--x", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "5"
