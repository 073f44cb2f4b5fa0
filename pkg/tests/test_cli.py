import json
import subprocess
import sys
from pathlib import Path

import pytest

from omegalab.cli import RunConfig, main

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    payload = json.loads(out.out) if out.out.strip() else None
    return code, payload, out.err


def test_ict_check_exact_map_yes(capsys):
    code, out, _ = run(capsys, "ict-check", "--system", str(SYSTEMS / "exact_map.json"), "--set", "H20", "--eps", "1/16")
    assert code == 0 and out["report"]["verdict"] == "yes"
    assert out["config"]["eps"] == "1/16"


def test_ict_check_golden_mean_no(capsys):
    code, out, _ = run(capsys, "ict-check", "--system", str(SYSTEMS / "goldenmean.json"),
                       "--set", "fixed0+cycle01", "--k", "2")
    assert code == 1 and out["report"]["verdict"] == "no"


def test_ict_check_outer_refutation(capsys):
    # -1 -> 0 -> 0 never returns, and the outer graph proves it
    code, out, _ = run(capsys, "ict-check", "--system", "exact_map", "--set=-1,0", "--eps", "1/16")
    assert code == 1 and out["report"]["mode"] == "outer"


def test_malformed_rational(capsys):
    code, out, err = run(capsys, "ict-check", "--system", "tent2", "--set", "1/3", "--eps", "1/0")
    assert code == 3 and out is None and "zero denominator" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "ict-check", "--system", "/nonexistent.json", "--eps", "1/4")
    assert code == 3 and "cannot read" in err


def test_dot_output(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, _, _ = run(capsys, "ict-check", "--system", "goldenmean", "--k", "2", "--dot", str(dot))
    assert code == 0 and dot.read_text().startswith("digraph")


@pytest.mark.parametrize("states,eps,code", [
    ("0,0,1/8", "1/2", 0),
    ("1/7,2/7,4/7,8/7", "1/8", 3),  # 8/7 leaves the domain
])
def test_shadow_tent2(capsys, states, eps, code):
    got, out, _ = run(capsys, "shadow", "--system", "tent2", "--states", states, "--eps", eps)
    assert got == code
    if code == 0:
        assert out["report"]["shadow"]["z"] == "1/32"


def test_shadow_exact_map(capsys):
    code, out, _ = run(capsys, "shadow", "--system", "exact_map", "--states", "1/3,4/3,7/5", "--eps", "1/5")
    assert code == 0 and out["report"]["delta"] == "3/20"


def test_shadow_impossible(capsys):
    code, out, _ = run(capsys, "shadow", "--system", "tent3/2", "--states", "1/3,1/2,13/16", "--eps", "1/8")
    assert code == 1 and out["report"]["result"] == "impossible"


def test_shadow_shift_from_file(capsys, tmp_path):
    f = tmp_path / "po.json"
    f.write_text(json.dumps({"states": ["00", "01", "10", "00"]}))
    code, out, _ = run(capsys, "shadow", "--system", "goldenmean", "--orbit", str(f))
    assert code == 0 and out["report"]["shadow"]["z"].startswith("00100")


def test_realize_commands(capsys):
    code, out, _ = run(capsys, "realize", "--system", "goldenmean", "--depth", "4", "--prefix", "64")
    assert code == 0 and len(out["report"]["point"]["prefix"]) == 64
    code, out, _ = run(capsys, "realize", "--system", "exact_map", "--set", "H20")
    assert code == 1 and out["report"]["verdict"] == "NotRealizable"
    code, out, _ = run(capsys, "realize", "--system", "sofic", "--set", "lambda")
    assert code == 1 and out["report"]["verdict"] == "NotRealizable"
    code, out, _ = run(capsys, "realize", "--system", "tent2", "--set", "2/3", "--depth", "5")
    assert code == 0 and out["report"]["verdict"] == "Realizable"


def test_realize_precondition_failure(capsys):
    code, _, err = run(capsys, "realize", "--system", "tent2", "--set", "2/7,4/7,6/7,2/3", "--depth", "4")
    assert code == 4 and "verdict no" in err


def test_examples(capsys):
    code, out, _ = run(capsys, "examples", "run-all")
    assert code == 0 and out["report"]["passed"] == 3
    code, out, _ = run(capsys, "examples", "run", "sofic_ICT")
    assert code == 0 and out["report"]["id"] == "sofic_ICT"


def test_oracle_size_guard(capsys):
    code, _, err = run(capsys, "oracle", "wi-ict", "--n", "25")
    assert code == 5 and "SizeError" in err


def test_oracle_reports_singleton_mismatches(capsys):
    # weak incompressibility is vacuous on one-point sets, chain transitivity is not
    code, out, err = run(capsys, "oracle", "wi-ict", "--n", "6", "--trials", "200", "--seed", "7")
    rep = out["report"]
    assert rep["invariance_failures"] == 0
    if rep["mismatches"]:
        assert code == 1 and len(rep["first_mismatch"]["set"]) == 1
    else:
        assert code == 0 and "mismatches: 0" in err


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "ict-check", "system": "goldenmean", "k": 3}))
    code, out, _ = run(capsys, "ict-check", "--config", str(cfg), "--k", "2")
    assert code == 0 and out["config"]["k"] == 2
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, _ = run(capsys, "ict-check", "--config", str(cfg))
    assert code == 3


def test_run_config_round_trip():
    cfg = RunConfig(command="realize", system="tent2", set="2/3", depth=4)
    assert RunConfig.from_json(cfg.to_json()) == cfg


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "examples", "run", "tent_no_hshadow", "--out", str(target))
    assert code == 0 and out is None
    assert json.loads(target.read_text())["report"]["passed"]


def test_budget_bits(capsys):
    code, _, err = run(capsys, "realize", "--system", "tent2", "--set", "2/7,4/7,6/7", "--depth", "6",
                       "--budget-bits", "8")
    assert code == 5 and "BudgetExceeded" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "omegalab", "examples", "run", "tent_no_hshadow"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["report"]["passed"]
