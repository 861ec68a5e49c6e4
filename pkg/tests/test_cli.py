"""End-to-end tests of the conemetric command line."""

import json
import math

import pytest

from conemetric.cli import main

S2_322 = json.dumps({"genus": 0, "saddles": ["3"], "minima": ["2"], "maxima": ["2"]})
UNEQUAL_FOOTBALL = json.dumps({"minima": ["3/2"], "maxima": ["5/2"]})


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_decide_exists(capsys):
    code, out, _ = _run(capsys, "decide", S2_322)
    assert code == 0
    verdict = json.loads(out)
    assert verdict["status"] == "exists"
    assert verdict["certificate"]["case"] == "ThreeIntegerOneSaddle"


def test_decide_not_exists(capsys):
    code, out, _ = _run(capsys, "decide", UNEQUAL_FOOTBALL)
    assert code == 1
    assert json.loads(out)["reason"] == "UnequalFootball"


def test_decide_out_of_scope(capsys):
    divisor = json.dumps({"minima": ["1/2", "1/3"], "maxima": ["5/6"]})
    code, out, _ = _run(capsys, "decide", divisor)
    assert code == 2
    assert json.loads(out)["status"] == "out_of_scope"


@pytest.mark.parametrize(
    "argument",
    [
        json.dumps({"saddles": ["5/2"]}),
        json.dumps({"saddles": [2.5]}),
        '{"saddles": [3',
        "[3, 2, 2]",
    ],
)
def test_decide_input_errors(capsys, argument):
    """Invalid divisors and malformed JSON exit 64 with a JSON error."""
    code, out, err = _run(capsys, "decide", argument)
    assert code == 64
    assert out == ""
    assert "error" in json.loads(err)


def test_decide_from_file_and_output(capsys, tmp_path):
    """@path inputs are read and --output receives the result."""
    source = tmp_path / "divisor.json"
    source.write_text(S2_322)
    target = tmp_path / "verdict.json"
    code, out, _ = _run(capsys, "--output", str(target), "decide", f"@{source}")
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["status"] == "exists"


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = _run(capsys, "decide", f"@{tmp_path / 'absent.json'}")
    assert code == 64
    assert json.loads(err)["error"] == "InputError"


def test_usage_errors(capsys):
    """Unknown subcommands, bad log levels and non-positive steps exit 64."""
    assert _run(capsys, "frobnicate")[0] == 64
    assert _run(capsys, "--log-level", "chatty", "decide", S2_322)[0] == 64
    assert _run(capsys, "eval-metric", "--alpha", "2", "--h", "-1")[0] == 64


def test_plan_single(capsys, tmp_path):
    """A plan is printed and its dot graph written."""
    dot = tmp_path / "plan.gv"
    code, out, _ = _run(capsys, "plan", S2_322, "--emit-dot", str(dot))
    assert code == 0
    plan = json.loads(out)
    assert plan["summary"]["leaves"] >= 2
    assert dot.read_text().startswith("digraph plan_0 {")


def test_plan_enumerates_every_saddle_choice(capsys):
    """S^2_{3,2,2} has plans with one, two and three saddles."""
    code, out, _ = _run(capsys, "plan", S2_322, "--enumerate")
    assert code == 0
    plans = json.loads(out)["plans"]
    assert len(plans) >= 3
    saddle_counts = {len(p["certificate"]["divisor"]["saddles"]) for p in plans}
    assert saddle_counts == {1, 2, 3}


def test_plan_echoes_not_exists(capsys):
    code, out, _ = _run(capsys, "plan", UNEQUAL_FOOTBALL)
    assert code == 1
    assert json.loads(out)["status"] == "not_exists"


def test_verify_form(capsys):
    code, out, _ = _run(capsys, "verify-form", '{"kind": "std2", "alpha": 3}')
    assert code == 0
    report = json.loads(out)
    assert report["ok"]
    assert report["divisor_degree"] == -2


def test_verify_form_rejects_bad_form(capsys):
    code, _, err = _run(capsys, "verify-form", '{"kind": "std3", "alpha": 2, "a": 1}')
    assert code == 64
    assert json.loads(err)["error"] == "InvalidParameter"


def test_eval_metric_football(capsys):
    """A closed-form football passes with length pi between its cone points."""
    code, out, _ = _run(capsys, "eval-metric", "--alpha", "3/2")
    assert code == 0
    report = json.loads(out)
    assert report["ok"]
    assert report["geodesic_length"] == pytest.approx(math.pi, abs=1e-6)
    assert len(report["cone_fits"]) == 2
    assert report["curvature"]["samples"] == []


def test_eval_metric_tolerance_failure(capsys):
    code, out, _ = _run(capsys, "eval-metric", "--alpha", "2", "--tolerance", "1e-15")
    assert code == 1
    assert not json.loads(out)["ok"]


def test_eval_metric_sources_are_exclusive(capsys):
    code = main(["eval-metric", "--alpha", "2", "--form", '{"kind": "std2", "alpha": 2}'])
    assert code == 64


def test_eval_metric_shift_needs_integer_angle(capsys):
    code, _, err = _run(capsys, "eval-metric", "--alpha", "1/2", "--b", "1")
    assert code == 64
    assert json.loads(err)["error"] == "ParameterMismatch"


def test_eval_metric_writes_csv(capsys, tmp_path):
    report = tmp_path / "grid.csv"
    code, _, _ = _run(capsys, "eval-metric", "--alpha", "2", "--report", str(report))
    assert code == 0
    assert report.read_text().startswith("z_re,z_im,lambda,K,residual")


def test_oracle_pq_without_solution(capsys):
    """S = -1, D = 0 has no nonnegative integer solution."""
    code, out, _ = _run(capsys, "oracle", "pq", "--S", "-1", "--D", "0")
    assert code == 0
    assert json.loads(out)["details"]["solution"] is None


def test_oracle_pq_solution(capsys):
    code, out, _ = _run(capsys, "oracle", "pq", "--S", "4", "--D", "2")
    assert code == 0
    assert json.loads(out)["details"]["solution"] == {"p": 1, "q": 3}


def test_oracle_pq_needs_both_values(capsys):
    assert _run(capsys, "oracle", "pq", "--S", "4")[0] == 64


def test_oracle_roundtrip_small(capsys):
    code, out, _ = _run(capsys, "oracle", "roundtrip", "--count", "20", "--seed", "3")
    assert code == 0
    report = json.loads(out)
    assert report["cases"] == 20
    assert report["counterexamples"] == []


def test_plan_two_leaf_tree(capsys):
    """S^2_{2,1/2,1/2} glues two footballs of angle 1/2 along one slit."""
    divisor = json.dumps({"saddles": ["2"], "minima": ["1/2", "1/2"]})
    code, out, _ = _run(capsys, "plan", divisor)
    assert code == 0
    summary = json.loads(out)["summary"]
    assert summary["leaves"] == 2
    assert summary["footballs"] == ["1/2", "1/2"]


def test_oracle_small_lemma_sweep(capsys):
    code, out, _ = _run(capsys, "oracle", "lemma-a1", "--max-len", "5", "--max-entry", "3")
    assert code == 0
    assert json.loads(out)["counterexamples"] == []


def test_oracle_size_limit(capsys):
    code, _, err = _run(capsys, "oracle", "lemma-a1", "--max-len", "13")
    assert code == 64
    assert json.loads(err)["error"] == "SizeLimitExceeded"


def test_plan_torus_without_extremal_cone_points(capsys):
    """A torus with one saddle of angle 3 plans with one handle."""
    code, out, _ = _run(capsys, "plan", json.dumps({"genus": 1, "saddles": ["3"]}))
    assert code == 0
    assert json.loads(out)["summary"]["handles"] == 1
