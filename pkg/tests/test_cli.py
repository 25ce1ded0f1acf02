import json

from click.testing import CliRunner

from pta_engine.assets import asset_path
from pta_engine.cli import main
from tests.conftest import CHAIN_FCM, REPO


def test_validate_bundled_goalnet():
    runner = CliRunner()
    result = runner.invoke(main, ["validate", "goalnet",
                                  str(asset_path("main_routine.json"))])
    assert result.exit_code == 0
    assert "ok" in result.output


def test_validate_invalid_document(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "name": "bad",
        "states": [{"id": "s", "name": "s", "is_start": True},
                   {"id": "e", "name": "e", "is_end": True}],
        "transitions": [{"id": "t", "name": "t", "tasks": []}],
        "arcs": [{"from": "s", "to": "t"}],  # t never reaches e
        "branches": [],
    }), encoding="utf-8")
    result = CliRunner().invoke(main, ["validate", "goalnet", str(bad)])
    assert result.exit_code == 1


def test_validate_usage_error():
    result = CliRunner().invoke(main, ["validate", "sonnet", "x.json"])
    assert result.exit_code == 2


def test_fcm_eval_chain(tmp_path):
    fcm_path = tmp_path / "chain.json"
    fcm_path.write_text(json.dumps(CHAIN_FCM), encoding="utf-8")
    act_path = tmp_path / "act.json"
    act_path.write_text(json.dumps({"L": 1.0}), encoding="utf-8")
    result = CliRunner().invoke(main, ["fcm-eval", "--fcm", str(fcm_path),
                                       "--activations", str(act_path)])
    assert result.exit_code == 0
    out = json.loads(result.output)
    assert out["final"]["M"] == 1.0
    assert out["converged"] is True


def test_fcm_eval_runtime_error(tmp_path):
    fcm_path = tmp_path / "chain.json"
    fcm_path.write_text(json.dumps(CHAIN_FCM), encoding="utf-8")
    act_path = tmp_path / "act.json"
    act_path.write_text(json.dumps({"ghost": 1.0}), encoding="utf-8")
    result = CliRunner().invoke(main, ["fcm-eval", "--fcm", str(fcm_path),
                                       "--activations", str(act_path)])
    assert result.exit_code == 3


def test_run_case1(tmp_path):
    case = REPO / "cases" / "case1"
    result = CliRunner().invoke(main, [
        "run", "--config", str(case / "config.json"),
        "--trace", str(case / "trace.json"),
        "--out-dir", str(tmp_path / "out"),
    ])
    assert result.exit_code == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    directives = [d for c in report["cycles"] for d in c["directives"]]
    assert any(d.get("cue_id") == "cue-not-learning" for d in directives)


def test_run_mismatched_trace_exits_3(tmp_path):
    case = REPO / "cases" / "case1"
    trace = tmp_path / "trace.json"
    trace.write_text(json.dumps({"steps": [
        {"at_ms": 1000, "input": {"kind": "choice", "id": "no-such-choice"}},
    ]}), encoding="utf-8")
    result = CliRunner().invoke(main, [
        "run", "--config", str(case / "config.json"),
        "--trace", str(trace), "--out-dir", str(tmp_path / "out"),
    ])
    assert result.exit_code == 3
