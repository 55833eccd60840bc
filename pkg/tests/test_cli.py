import json

import pytest

from planfit.cli import main

ROW1_INSTANCE = json.dumps({
    "costs": [[10, 2, 20], [12, 7, 9]],
    "supply": [10, 25],
    "demand": [5, 15, 15],
})


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_reduce_literal(capsys):
    code, out, err = run_cli(capsys, "reduce", '{"costs": [[10,2,20],[12,7,9]]}')
    assert code == 0
    assert "ctilde: (-3.000, 13.000)" in out
    assert "-0.224860" in out and "0.974391" in out


def test_reduce_json_mode(capsys):
    code, out, _ = run_cli(capsys, "reduce", "[[10,2,20],[12,7,9]]", "--json")
    payload = json.loads(out)
    assert payload["ctilde"] == [-3.0, 13.0]
    assert payload["unlv"] == pytest.approx([-0.22485951, 0.9743912])


def test_solve_row_one(capsys):
    code, out, _ = run_cli(capsys, "solve", ROW1_INSTANCE, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["free_vars"] == pytest.approx([5.0, 15.0])
    assert payload["active_pair"] == [1, 4]
    assert payload["raw_cost"] == pytest.approx(250.0)
    assert payload["normalized_cost"] == pytest.approx(8.963, abs=1e-3)


def test_solve_text_output(capsys):
    code, out, _ = run_cli(capsys, "solve", ROW1_INSTANCE)
    assert code == 0
    assert "active pair: 1-4" in out
    assert "normalized cost: 8.96" in out


def test_solve_reads_file(tmp_path, capsys):
    path = tmp_path / "instance.json"
    path.write_text(ROW1_INSTANCE)
    code, out, _ = run_cli(capsys, "solve", str(path), "--json")
    assert code == 0
    assert json.loads(out)["active_pair"] == [1, 4]


def test_classify(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--dms", '{"supply": [10,25], "demand": [5,15,15]}')
    assert code == 0
    assert "type: 13 (group 5)" in out


def test_classify_json(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--dms", '{"supply": [10,25], "demand": [5,15,15]}',
        "--json")
    payload = json.loads(out)
    assert payload["active_constraints"] == [1, 2, 3, 4]
    assert payload["general_rank"] == 8


def test_polygon(capsys):
    code, out, _ = run_cli(capsys, "polygon", "2", "3", "1.0", "--json")
    payload = json.loads(out)
    assert payload["demand"][1] == pytest.approx(2.0)
    assert sum(payload["supply"]) == pytest.approx(sum(payload["demand"]))


def test_catalogue_csv(capsys):
    code, out, _ = run_cli(capsys, "catalogue")
    lines = out.strip().splitlines()
    assert len(lines) == 19
    assert lines[9].startswith("9,1-2-3-5,")
    assert ",8," in lines[9]  # rank sum, not the published misprint


def test_catalogue_json(capsys):
    code, out, _ = run_cli(capsys, "catalogue", "--json")
    rows = json.loads(out)
    assert len(rows) == 18
    assert rows[8]["type_id"] == 9
    assert rows[8]["general_rank"] == 8


def test_estimate_from_log(tmp_path, capsys):
    log = tmp_path / "log.csv"
    log.write_text(
        "step,a1,a2,b1,b2,b3,x22,x23\n"
        "1,10,25,5,15,15,5,15\n"
        "2,30,10,15,10,15,0,10\n"
    )
    code, out, _ = run_cli(capsys, "estimate", str(log), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["steps"] == 2
    assert len(payload["trace"]) == 2


def test_estimate_writes_outputs(tmp_path, capsys):
    log = tmp_path / "log.csv"
    log.write_text(
        "step,a1,a2,b1,b2,b3,x22,x23\n"
        "1,10,25,5,15,15,5,15\n"
        "2,30,10,15,10,15,0,10\n"
    )
    outdir = tmp_path / "out"
    code, out, _ = run_cli(capsys, "estimate", str(log), "--out", str(outdir))
    assert code == 0
    assert (outdir / "trace.csv").exists()
    assert (outdir / "convergence.png").exists()


def test_simulate_fixture(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--fixture", "--json")
    payload = json.loads(out)
    assert payload["effectiveness"] == 1.0
    assert payload["stopping_step"] == 19
    assert payload["final_estimate"] == pytest.approx([-0.732, 0.682], abs=1e-3)


def test_simulate_fixture_writes_report(tmp_path, capsys):
    outdir = tmp_path / "run"
    code, out, _ = run_cli(capsys, "simulate", "--fixture", "--out", str(outdir))
    assert code == 0
    for name in ("result.csv", "result.json", "convergence.png", "deficiency.png"):
        assert (outdir / name).exists(), name


def test_simulate_generated(capsys):
    code, out, _ = run_cli(
        capsys, "simulate", "--steps", "8", "--seed", "3",
        "--truth-unlv", "-0.22485951", "0.9743912", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["steps"] == 8
    assert payload["source"] == "generated"


def test_simulate_generated_needs_truth(capsys):
    code, out, err = run_cli(capsys, "simulate", "--steps", "5", "--seed", "1")
    assert code == 2
    assert err.startswith("DomainError")


def test_error_exit_code_and_name(capsys):
    bad = json.dumps({
        "costs": [[10, 2, 20], [12, 7, 9]],
        "supply": [10, 20],
        "demand": [5, 15, 15],
    })
    code, out, err = run_cli(capsys, "solve", bad)
    assert code == 2
    assert err.startswith("BalanceError")
    assert out == ""


def test_missing_file_exit_code(capsys):
    code, _, err = run_cli(capsys, "solve", "/nonexistent/instance.json")
    assert code == 2
    assert "FileNotFoundError" in err


def test_invalid_json_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{costs: oops")
    code, _, err = run_cli(capsys, "solve", str(path))
    assert code == 2
    assert err.startswith("ShapeError")
