import json

import pytest

from htcpkit.cli import emit_report, exit_code, fixture_names, load, main, run
from htcpkit.scenario import parse_scenario


def test_list_fixtures(capsys):
    assert main(["list-fixtures"]) == 0
    out = capsys.readouterr().out
    for n in ("auslander_a3", "heart_a2_tstructure", "stable_quotient_a2", "broken_a2"):
        assert n in out
    assert set(fixture_names()) >= {"auslander_a3", "heart_a2_tstructure", "stable_quotient_a2"}


def test_validate_command(capsys, tmp_path):
    assert main(["validate", "auslander_a3"]) == 0
    bad = tmp_path / "bad.scn"
    bad.write_text("[quiver]\nvertices 1\n[subcat]\nA = perp1(B)\n")
    assert main(["validate", str(bad)]) == 2
    assert "'B'" in capsys.readouterr().err


def test_missing_file_is_error():
    assert main(["run", "/nonexistent/x.scn"]) == 2


def test_empty_report_is_valid():
    rep, _ = run(parse_scenario("[quiver]\nvertices 1\n"))
    doc = json.loads(emit_report(rep, "json"))
    assert doc["steps"] == [] and doc["status"] == "pass" and doc["schema"] == "htcpkit.report/1"


def test_expectation_failure_exit_1(tmp_path, capsys):
    text = load("stable_quotient_a2")
    f = tmp_path / "s.scn"
    from htcpkit.cli import fixture_text
    f.write_text(fixture_text("stable_quotient_a2").replace(
        "stable_quotient.nonzero_indecomposables = 1", "stable_quotient.nonzero_indecomposables = 2"))
    assert main(["run", str(f)]) == 1
    assert "actual 1" in capsys.readouterr().out
    assert text.name == "stable_quotient_a2"


def test_step_error_exit_2(tmp_path):
    f = tmp_path / "e.scn"
    f.write_text("[quiver]\nvertices 1 2\narrow a 1 2\n[objects]\nP1 = P(1)\nuniverse = P1\n"
                 "[pipeline]\noctahedron 5\n")
    rep, _ = run(parse_scenario(f.read_text()))
    assert rep["steps"][0]["status"] == "error" and "complexes" in rep["steps"][0]["error"]
    assert main(["run", str(f)]) == 2


def test_failing_step_carries_witness():
    rep, _ = run(load("broken_a2"))
    v = next(s for s in rep["steps"] if s["id"] == "validate")
    assert v["status"] == "fail"
    assert v["result"]["hov2"]["witness"]["object"] == "S1"
    assert "S1" in emit_report(rep, "text")
    assert exit_code(rep) == 0


def test_budget_exceeded_fails():
    rep, _ = run(load("stable_quotient_a2"), budget_ms=0)
    assert rep["budget_exceeded"] and exit_code(rep) == 1


def test_dependent_steps_skipped(tmp_path):
    text = ("[quiver]\nvertices 1 2\narrow a 1 2\n[objects]\nP1 = P(1)\nuniverse = P1\n"
            "[subcat]\nC = all\n[pair]\nH = heart C C\n[pipeline]\nheart H as a\nheart H as b\n")
    rep, _ = run(parse_scenario(text))
    assert rep["steps"][0]["status"] == "error"
    assert rep["steps"][1]["status"] == "skipped"


@pytest.mark.parametrize("name", ["stable_quotient_a2", "broken_a2"])
def test_json_and_text_agree(name):
    rep, _ = run(load(name), seed=5)
    text = emit_report(rep, "text").splitlines()
    doc = json.loads(emit_report(rep, "json"))
    assert text[0].endswith(f"status={doc['status']}")
    for s in doc["steps"]:
        line = next(ln for ln in text if ln.strip().startswith(f"step {s['id']} "))
        assert line.split()[2] == s["status"]
    for e in doc["expectations"]:
        line = next(ln for ln in text if ln.strip().startswith(f"expect {e['path']} "))
        assert line.split(":")[-1].split()[0] == e["status"]


def test_json_deterministic():
    a, _ = run(load("auslander_a3"), seed=7)
    b, _ = run(load("auslander_a3"), seed=7)
    assert emit_report(a, "json") == emit_report(b, "json")


def test_witness_flag_keeps_passing_witnesses():
    plain, _ = run(load("stable_quotient_a2"))
    full, _ = run(load("stable_quotient_a2"), witnesses=True)
    assert len(emit_report(full, "json")) >= len(emit_report(plain, "json"))
