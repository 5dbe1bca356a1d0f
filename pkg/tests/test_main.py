import json
import os

import pytest

from conftest import EXPECTED, algebra_path
from analytic import QuadratureResult
from config import WHEEL_SCALE, WHEEL_TOLERANCE
from main import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, main, wheel_criterion


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("LCS_MODES", "LCS_DEG", "LCS_MAX_K", "LCS_WHEEL_N", "LCS_EPSILON", "LCS_SCALE", "LCS_THREADS"):
        monkeypatch.delenv(name, raising=False)


def run_json(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def assert_subset(expected, actual, path="report"):
    if isinstance(expected, dict):
        assert isinstance(actual, dict), path
        for key, value in expected.items():
            assert key in actual, f"{path}.{key} missing"
            assert_subset(value, actual[key], f"{path}.{key}")
    else:
        assert actual == expected, path


def golden(name):
    with open(os.path.join(EXPECTED, f"{name}.json"), encoding="utf-8") as f:
        return json.load(f)


def test_validate_sl2(capsys):
    code, report = run_json(capsys, "validate", "--algebra", algebra_path("sl2"))
    assert code == EXIT_OK
    assert_subset(golden("validate_sl2"), report)
    assert len(report["checks"]) == 3


def test_validate_ternary_fixture(capsys):
    code, report = run_json(capsys, "validate", "--algebra", algebra_path("l3_trace"))
    assert code == EXIT_OK
    assert_subset(golden("validate_l3_trace"), report)


def test_validate_broken_jacobi(capsys):
    code, report = run_json(capsys, "validate", "--algebra", algebra_path("broken_jacobi"))
    assert code == EXIT_CHECK_FAILED
    assert_subset(golden("validate_broken_jacobi"), report)
    assert "e1, e2, e3" in report["failure"]


def test_validate_curved_algebra(capsys):
    code, report = run_json(capsys, "validate", "--algebra", algebra_path("curved_toy"))
    assert code == EXIT_OK
    assert any(c["name"] == "curvature" for c in report["checks"])


@pytest.mark.parametrize("name", ["abelian", "e1e2", "l3_trace"])
def test_partition_goldens(capsys, name):
    code, report = run_json(capsys, "partition", "--algebra", algebra_path(name), "--max-k", "2")
    assert code == EXIT_OK
    assert_subset(golden(f"partition_{name}"), report)


def test_partition_of_a_non_algebra(capsys):
    code, report = run_json(capsys, "partition", "--algebra", algebra_path("broken_jacobi"))
    assert code == EXIT_CHECK_FAILED
    assert not report["passed"]


def test_numeric_position_wheel_one_vertex(capsys):
    code, report = run_json(capsys, "numeric", "appendixF", "--wheel-n", "1")
    assert code == EXIT_OK
    assert_subset(golden("numeric_appendixF_n1"), report)


def wheel_results(values, flagged=()):
    return [QuadratureResult(2, eps, WHEEL_SCALE, v, v, 0.0, 8000, eps in flagged)
            for eps, v in zip((1e-2, 1e-3, 1e-4), values)]


def test_wheel_criterion_accepts_settled_values():
    passed, differences, failure = wheel_criterion(2, wheel_results([-0.0081, -0.00809, -0.008089995]))
    assert passed, failure
    assert differences[0] > differences[1]


@pytest.mark.parametrize("values, flagged, reason", [
    ([2.1e-9, -3.4e-9, 1.2e-9], (), "exceeds"),
    ([-0.0081, -0.00809, -0.0080899], (1e-3,), "did not settle"),
    ([-0.0081, -0.00809, -0.00807], (), "do not decrease"),
    ([-0.0081, -0.0072, -0.0065], (), "exceeds"),
])
def test_wheel_criterion_rejects(values, flagged, reason):
    passed, _, failure = wheel_criterion(2, wheel_results(values, flagged))
    assert not passed
    assert reason in failure


def test_numeric_position_wheel_two_vertices(capsys):
    code, report = run_json(capsys, "numeric", "appendixF", "--wheel-n", "2")
    assert code == EXIT_OK, report["failure"]
    rows = report["tables"]["convergence"]
    assert not any(row["flagged"] for row in rows)
    assert abs(rows[-1]["value"]) > 1e-3
    assert report["differences"][-1] <= WHEEL_TOLERANCE * abs(rows[-1]["value"])
    assert report["parameters"]["L"] == WHEEL_SCALE


@pytest.mark.slow
def test_numeric_position_wheel_three_vertices(capsys):
    code, report = run_json(capsys, "numeric", "appendixF", "--wheel-n", "3")
    assert code == EXIT_OK, report["failure"]
    rows = report["tables"]["convergence"]
    assert not any(row["flagged"] for row in rows)
    assert abs(rows[-1]["value"]) > 1e-4


@pytest.mark.parametrize("n", [2, 3])
def test_numeric_zeta_trace(capsys, n):
    code, report = run_json(capsys, "numeric", "zeta-trace", "--wheel-n", str(n), "--modes", "4000")
    assert code == EXIT_OK
    assert report["result"]["quantity"] == "zeta-trace"


def test_numeric_sign_limit(capsys):
    code, report = run_json(capsys, "numeric", "sign-limit")
    assert code == EXIT_OK
    assert report["result"]["abs_err"] < 0.01


def test_numeric_rgflow(capsys):
    code, report = run_json(capsys, "numeric", "rgflow", "--modes", "1", "--deg", "2", "--epsilon", "0.1")
    assert code == EXIT_OK
    assert report["result"]["weight_one"]
    assert report["parameters"]["algebra"] == "double(sl2)"
    assert report["parameters"]["reach"] == 0


def test_numeric_qme(capsys):
    code, report = run_json(capsys, "numeric", "qme", "--modes", "2", "--deg", "2")
    assert code == EXIT_OK, report["failure"]
    assert report["parameters"]["reach"] == 0
    assert report["result"]["tree_level"] <= 1e-6
    assert report["result"]["one_loop"] <= 1e-6
    assert report["result"]["terms"] > 0


def test_missing_file_is_an_input_error(capsys, tmp_path):
    assert main(["validate", "--algebra", str(tmp_path / "missing.json")]) == EXIT_INPUT_ERROR


def test_inconsistent_algebra_is_an_input_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}],
        "brackets": [{"arity": 2, "inputs": ["a", "b"], "output": [{"basis": "a", "coeff": "1"}]}],
    }))
    assert main(["validate", "--algebra", str(path)]) == EXIT_INPUT_ERROR
    assert "degree-inconsistent" in capsys.readouterr().err


def test_unsorted_bracket_inputs_are_an_input_error(capsys, tmp_path):
    path = tmp_path / "unsorted.json"
    path.write_text(json.dumps({
        "basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 0}],
        "brackets": [{"arity": 2, "inputs": ["b", "a"], "output": [{"basis": "a", "coeff": "1"}]}],
    }))
    assert main(["validate", "--algebra", str(path)]) == EXIT_INPUT_ERROR
    assert "out of basis order" in capsys.readouterr().err


def test_out_of_range_parameter(capsys):
    assert main(["partition", "--algebra", algebra_path("sl2"), "--max-k", "9"]) == EXIT_INPUT_ERROR


def test_text_output_and_markdown_file(capsys, tmp_path):
    out = tmp_path / "sl2.md"
    code = main(["validate", "--algebra", algebra_path("sl2"), "--out", str(out)])
    text = capsys.readouterr().out
    assert code == EXIT_OK
    assert "✅ PASS" in text
    assert out.read_text(encoding="utf-8").startswith("# 📊")


def test_json_file_matches_stdout(capsys, tmp_path):
    out = tmp_path / "report.json"
    main(["partition", "--algebra", algebra_path("e1e2"), "--out", str(out), "--format", "json"])
    assert capsys.readouterr().out == ""
    with open(out, encoding="utf-8") as f:
        assert_subset(golden("partition_e1e2"), json.load(f))
