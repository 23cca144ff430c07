import json

import pytest

from qyangian.cli import ConfigError, RunConfig, main, run_dump, run_verify
from qyangian.findings import FindingsReport
from qyangian.hopfaudit import load_presentation, presentation_json


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rmatrix_suite_exits_zero(capsys):
    code, out, _ = run(["verify", "--suite", "rmatrix", "--n", "2"], capsys)
    assert code == 0
    rep = json.loads(out)
    ids = {f["id"]: f["status"] for f in rep["findings"]}
    assert ids["unitarity.twisted"] == "pass" and ids["cybe.twisted"] == "pass"
    assert rep["meta"]["suites"] == ["rmatrix"]


def test_genuine_failures_exit_one(capsys):
    code, out, _ = run(["verify", "--suite", "model", "--n", "2"], capsys)
    assert code == 1
    assert json.loads(out)["summary"]["fail"] == 2


@pytest.mark.parametrize("args", [
    ["verify", "--n", "1"],
    ["verify", "--suite", "nope"],
    ["verify", "--max-level", "13"],
    ["verify", "--max-degree", "-1"],
    ["verify", "--bogus"],
    ["dump", "weird"],
    [],
    ["report", "/nonexistent/report.json"],
])
def test_configuration_errors_exit_two(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 2 and "configuration error" in err


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(n=1).validate()
    with pytest.raises(ConfigError):
        RunConfig(suites=[]).validate()
    cfg = RunConfig(suites=["hopf", "model", "pairing"])
    assert cfg.ordered_suites() == ["model", "pairing", "hopf"]
    assert RunConfig().ordered_suites()[0] == "model"


def test_controls_are_info_and_do_not_change_exit(capsys):
    code_plain, _, _ = run(["verify", "--suite", "rmatrix", "--suite", "pairing", "--n", "2"], capsys)
    code, out, _ = run(["verify", "--suite", "rmatrix", "--suite", "pairing", "--n", "2", "--controls"], capsys)
    assert code == code_plain == 0
    controls = [f for f in json.loads(out)["findings"] if f["control"]]
    assert controls and all(f["status"] == "info" for f in controls)


def test_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        main(["verify", "--suite", "pairing", "--suite", "tensor", "--n", "2", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_timing_is_opt_in(capsys):
    _, out, _ = run(["verify", "--suite", "pairing", "--n", "2"], capsys)
    assert all("seconds" not in f for f in json.loads(out)["findings"])
    _, out, _ = run(["verify", "--suite", "pairing", "--n", "2", "--timing"], capsys)
    assert all("seconds" in f for f in json.loads(out)["findings"])


def test_markdown_and_report_command(tmp_path, capsys):
    path = tmp_path / "r.json"
    main(["verify", "--suite", "model", "--n", "2", "--out", str(path)])
    code, md, _ = run(["report", str(path)], capsys)
    assert code == 0
    assert md.startswith("# Verification report")
    assert "| model | [k,x].+1.1,1 | fail |" in md
    code, md2, _ = run(["verify", "--suite", "model", "--n", "2", "--format", "markdown"], capsys)
    assert code == 1 and md2 == md


def test_config_file_with_flags_winning(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 3, "suites": ["pairing"], "format": "markdown"}))
    code, out, _ = run(["verify", "--config", str(cfg), "--n", "2"], capsys)
    assert code == 0 and "- n: 2" in out and "- suites: ['pairing']" in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "colour": "blue"}))
    code, _, err = run(["verify", "--config", str(bad)], capsys)
    assert code == 2 and "colour" in err


def test_structure_constants_dump(capsys):
    code, out, _ = run(["dump", "structure-constants", "--n", "2"], capsys)
    assert code == 0
    rows = json.loads(out)["brackets"]
    assert {"left": "x+_1", "right": "x-_1", "result": [["h_1", "1/1"]]} in rows
    assert out == run_dump("structure-constants", RunConfig(n=2))


@pytest.mark.parametrize("kind", ["dual-basis", "tower", "rmatrix", "presentation"])
def test_dumps_are_stable(kind):
    cfg = RunConfig(n=2, max_level=2)
    first = run_dump(kind, cfg)
    assert first == run_dump(kind, cfg)
    json.loads(first)


def test_rmatrix_dump_uses_both_factors():
    d = json.loads(run_dump("rmatrix", RunConfig(n=2)))
    text = json.dumps(d)
    assert "u-v" in text and "u+v" in text


def test_presentation_dump_round_trips(tmp_path):
    out = tmp_path / "p.json"
    assert main(["dump", "presentation", "--n", "2", "--out", str(out)]) == 0
    rt, dt = load_presentation(str(out))
    again = json.dumps({"relations": rt.to_json(), "coproduct": dt.to_json()}, sort_keys=True, indent=1,
                       ensure_ascii=False) + "\n"
    assert again == out.read_text(encoding="utf-8") == presentation_json(2)


def test_aborted_suite_becomes_failure(monkeypatch):
    from qyangian import suites
    from qyangian.currents import TwistViolation

    def boom(*args, **kwargs):
        raise TwistViolation("forced")

    monkeypatch.setattr(suites, "run_suite", boom)
    rep = run_verify(RunConfig(n=2, suites=["model"]))
    assert isinstance(rep, FindingsReport)
    f = rep.by_id("model.aborted")
    assert f.status == "fail" and f.witness["error"] == "TwistViolation"
