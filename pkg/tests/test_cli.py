import io
import json
import math
from contextlib import redirect_stderr, redirect_stdout

import pytest

from tricomi_forge.cli import run


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


RECORD_KEYS = {"problem", "seed", "depth", "path", "f", "residual"}
PROBLEM_KEYS = {"a", "base_x", "base_y"}


class TestConstruct:
    def test_example_1_text(self):
        code, out, _ = cli("construct", "--a", "x", "--t", "y")
        assert code == 0
        assert out == "f(x,y) = 1/2*y^2 - 1/6*x^3\n"

    def test_example_2_text(self):
        code, out, _ = cli("construct", "--a", "cos(x)", "--t", "y")
        assert code == 0
        assert out == "f(x,y) = -1 + 1/2*y^2 + cos(x)\n"

    def test_json_schema(self):
        code, out, _ = cli("construct", "--a", "x", "--t", "y",
                           "--output", "json")
        payload = json.loads(out)
        assert set(payload) == RECORD_KEYS
        assert set(payload["problem"]) == PROBLEM_KEYS
        assert payload["problem"] == {"a": "x", "base_x": "0", "base_y": "0"}
        assert payload["f"] == "1/2*y^2 - 1/6*x^3"
        assert payload["residual"] == "0"
        assert payload["path"] == "symbolic"
        assert payload["depth"] == 1

    def test_rational_base_points_round_trip(self):
        # negative values use the --flag=value spelling, as usual with argparse
        code, out, _ = cli("construct", "--a", "x", "--t", "y",
                           "--base-x", "1/2", "--base-y=-2/3",
                           "--output", "json")
        payload = json.loads(out)
        assert payload["problem"]["base_x"] == "1/2"
        assert payload["problem"]["base_y"] == "-2/3"

    def test_unchecked_constructs_from_non_solution(self):
        code, out, _ = cli("construct", "--a", "x", "--t", "x^2",
                           "--unchecked", "--output", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["path"] == "hybrid"
        assert payload["residual"] != "0"


class TestExitCodes:
    def test_seed_not_a_solution_is_3(self):
        code, _, err = cli("construct", "--a", "x", "--t", "x^2")
        assert code == 3
        assert "residual" in err and "2" in err

    def test_boundary_violation_is_3(self):
        code, _, err = cli("bvp", "--a", "x", "--t", "y")
        assert code == 3

    def test_not_integrable_is_3(self):
        code, _, err = cli("construct", "--a", "exp(x^2)", "--t", "y")
        assert code == 3
        assert "numeric" in err

    def test_parse_error_is_2(self):
        code, _, err = cli("construct", "--a", "x", "--t", "cos(x")
        assert code == 2
        code, _, _ = cli("construct", "--a", "x", "--t", "z+1")
        assert code == 2

    def test_y_in_coefficient_is_2(self):
        code, _, err = cli("construct", "--a", "x+y", "--t", "y")
        assert code == 2

    def test_bad_flags_are_2(self):
        code, _, _ = cli("construct", "--a", "x")
        assert code == 2
        code, _, _ = cli("frobnicate")
        assert code == 2
        code, _, _ = cli("iterate", "--a", "x", "--t", "1", "--n", "0")
        assert code == 2

    def test_non_convergence_is_4(self):
        # an absurdly small tolerance cannot be met within the depth cap
        code, _, err = cli("verify", "--a", "exp(x^2)", "--t", "y",
                           "--nx", "3", "--ny", "3", "--quad-tol", "1e-300")
        assert code == 4


class TestIterate:
    def test_json_array_matches_solutions_machine(self):
        code, out, _ = cli("iterate", "--a", "x", "--t", "1", "--n", "2",
                           "--output", "json")
        records = json.loads(out)
        assert [r["f"] for r in records] == ["y", "1/2*y^2 - 1/6*x^3"]
        assert [r["depth"] for r in records] == [1, 2]

    def test_text_lines(self):
        code, out, _ = cli("iterate", "--a", "x", "--t", "1", "--n", "3")
        assert out.splitlines() == [
            "f_1(x,y) = y",
            "f_2(x,y) = 1/2*y^2 - 1/6*x^3",
            "f_3(x,y) = 1/6*y^3 - 1/6*y*x^3",
        ]


class TestTrace:
    def test_trace_fields(self):
        code, out, _ = cli("trace", "--a", "x", "--t", "y",
                           "--output", "json")
        payload = json.loads(out)
        assert payload["t"] == "y"
        assert payload["u"] == "-1/2*x^2"
        assert payload["g"] == "0"
        assert payload["h"] == "-1/6*x^3"
        assert payload["f"] == "1/2*y^2 - 1/6*x^3"


class TestVerify:
    def test_symbolic_json(self):
        code, out, _ = cli("verify", "--a", "x", "--t", "y",
                           "--output", "json")
        payload = json.loads(out)
        assert payload["construction"] == "symbolic"
        assert payload["method"] == "symbolic_expr_eval"
        assert payload["symbolic_zero"] is True
        assert payload["max_abs_residual"] == 0.0
        assert payload["grid"]["nx"] == 21

    def test_numeric_fallback_json(self):
        code, out, _ = cli("verify", "--a", "exp(x^2)", "--t", "y",
                           "--nx", "5", "--ny", "5", "--output", "json")
        payload = json.loads(out)
        assert payload["construction"] == "numeric"
        assert payload["method"] == "finite_difference"
        assert payload["max_abs_residual"] <= 1e-4

    def test_csv_golden(self):
        code, out, _ = cli("verify", "--a", "x", "--t", "y",
                           "--nx", "3", "--ny", "3", "--output", "csv")
        lines = out.splitlines()
        assert lines[0] == "x,y,f,residual"
        assert len(lines) == 10
        assert lines[1] == "-1,-1,0.66666666666666663,0"
        # 17 significant digits survive a float round trip
        for line in lines[1:]:
            x, y, f, r = line.split(",")
            assert float(f) == float(f"{float(f):.17g}")

    def test_csv_fd_border_is_nan(self):
        code, out, _ = cli("verify", "--a", "exp(x^2)", "--t", "y",
                           "--nx", "3", "--ny", "3", "--output", "csv")
        lines = out.splitlines()[1:]
        corner = lines[0].split(",")
        center = lines[4].split(",")
        assert corner[3] == "nan"
        assert math.isfinite(float(center[3]))


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("construct", "--a", "x", "--t", "y", "--output", "json"),
        ("iterate", "--a", "x", "--t", "1", "--n", "4", "--output", "json"),
        ("trace", "--a", "cos(x)", "--t", "y", "--output", "json"),
        ("verify", "--a", "x", "--t", "y", "--output", "csv",
         "--nx", "5", "--ny", "5"),
        ("verify", "--a", "exp(x^2)", "--t", "y", "--output", "json",
         "--nx", "3", "--ny", "3"),
    ])
    def test_identical_invocations_identical_bytes(self, argv):
        first = cli(*argv)
        second = cli(*argv)
        assert first == second
        assert first[0] == 0


class TestEnvAndFiles:
    def test_env_tol_and_flag_priority(self, monkeypatch):
        monkeypatch.setenv("TRICOMI_FORGE_QUAD_TOL", "1e-6")
        code, out, _ = cli("verify", "--a", "exp(x^2)", "--t", "y",
                           "--nx", "3", "--ny", "3", "--output", "json")
        assert json.loads(out)["quad_tol"] == 1e-6
        code, out, _ = cli("verify", "--a", "exp(x^2)", "--t", "y",
                           "--nx", "3", "--ny", "3", "--output", "json",
                           "--quad-tol", "1e-9")
        assert json.loads(out)["quad_tol"] == 1e-9

    def test_bad_env_tol_is_2(self, monkeypatch):
        monkeypatch.setenv("TRICOMI_FORGE_QUAD_TOL", "banana")
        code, _, err = cli("verify", "--a", "x", "--t", "y")
        assert code == 2

    def test_out_file(self, tmp_path):
        target = tmp_path / "record.json"
        code, out, _ = cli("construct", "--a", "x", "--t", "y",
                           "--output", "json", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["f"] == "1/2*y^2 - 1/6*x^3"


class TestBvp:
    def test_dirichlet_json(self):
        code, out, _ = cli("bvp", "--a", "x",
                           "--t", "-(1/6)*x^3 + 1/2*y^2",
                           "--output", "json")
        payload = json.loads(out)
        assert payload["f"] == "1/6*y^3 - 1/6*y*x^3"
        assert payload["boundary"]["kind"] == "dirichlet"
        assert payload["boundary"]["value"] == "0"

    def test_neumann_defect_is_zero(self):
        code, out, _ = cli("bvp", "--a", "x", "--t", "y",
                           "--kind", "neumann", "--output", "json")
        payload = json.loads(out)
        assert payload["boundary"]["kind"] == "neumann"
        assert payload["boundary"]["defect"] == "0"
