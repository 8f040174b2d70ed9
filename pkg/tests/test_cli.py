import json
import subprocess
import sys

import numpy as np
import pytest

from hybridfrac import oracle
from hybridfrac.cli import main, verify_alpha
from hybridfrac.problemfile import dump_problem


def run(*args):
    """Black-box invocation through the interpreter, as a user would."""
    proc = subprocess.run(
        [sys.executable, "-m", "hybridfrac", *args], capture_output=True, text=True, timeout=300
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def case_file(tmp_path):
    case = oracle.get_cases("5.1-1")[0]
    path = tmp_path / "case.json"
    dump_problem(case.problem, path, case.exact)
    return path


def _write(tmp_path, doc, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return p


def _rows(csv_text):
    lines = csv_text.strip().split("\n")
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def test_solve_case_csv(case_file, tmp_path):
    out = tmp_path / "out.csv"
    rc, _, err = run("solve", str(case_file), "--m", "10", "--out", str(out))
    assert rc == 0
    header, rows = _rows(out.read_text())
    assert header == ["t", "y_hf", "y_exact", "abs_err"]
    assert len(rows) == 11
    assert max(float(r[3]) for r in rows) <= 1e-11
    assert "max abs error" in err
    assert b"\r\n" not in out.read_bytes()


def test_solve_markdown_stdout(case_file):
    rc, out, _ = run("solve", str(case_file), "--m", "4", "--format", "md")
    assert rc == 0
    assert "| max abs error |" in out
    assert "| t | y_hf | y_exact | abs_err |" in out


def test_solve_zero_problem(tmp_path):
    p = _write(tmp_path, {"alpha": 1.5, "terms": [{"coeff": "1", "beta": 0.5}], "forcing": "0", "init": [0, 0]})
    assert main(["solve", str(p), "--m", "6", "--out", str(tmp_path / "z.csv")]) == 0
    header, rows = _rows((tmp_path / "z.csv").read_text())
    assert all(float(r[1]) == 0.0 for r in rows)
    assert all(r[2] == "" and r[3] == "" for r in rows)


def test_solve_output_is_deterministic(case_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["solve", str(case_file), "--m", "20", "--out", str(a)]) == 0
    assert main(["solve", str(case_file), "--m", "20", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "doc,needle",
    [
        ({"alpha": 1, "terms": [], "forcing": "t +* 2", "init": [0]}, "byte offset 3"),
        ({"alpha": 1, "terms": [], "forcing": "t", "init": [0], "colour": 1}, "unknown keys"),
        ({"alpha": 1, "terms": [], "forcing": "t", "init": [0, 1]}, "initial values"),
        ({"alpha": 1, "terms": [{"coeff": "1", "beta": 2}], "forcing": "t", "init": [0]}, "beta"),
        ({"alpha": 1, "terms": [], "forcing": "log(t)", "init": [0]}, "byte offset 0"),
        ({"alpha": 1, "terms": [{"coeff": "1", "beta": 0, "power": 0.5}], "forcing": "-1", "init": [0]}, "node"),
        ("{not json", "invalid JSON"),
    ],
)
def test_solve_input_errors_exit_1(tmp_path, doc, needle):
    p = _write(tmp_path, doc)
    rc, _, err = run("solve", str(p), "--m", "8")
    assert rc == 1
    assert needle in err


def test_solve_missing_file_exit_1(tmp_path):
    rc, _, err = run("solve", str(tmp_path / "nope.json"), "--m", "8")
    assert rc == 1 and "error" in err


def test_solve_convergence_failure_exit_2(tmp_path):
    p = _write(tmp_path, {"alpha": 1, "terms": [{"coeff": "5", "beta": 0, "power": 3}], "forcing": "50", "init": [0]})
    rc, _, err = run("solve", str(p), "--m", "2")
    assert rc == 2
    assert "node 1" in err


def test_bench_suite_selection(tmp_path):
    rc, out, _ = run("bench", "--suite", "5.4", "--out-dir", str(tmp_path))
    assert rc == 0
    names = sorted(p.stem for p in tmp_path.glob("*.csv"))
    assert names == ["5.4-1", "5.4-2", "5.4-3", "5.4-4"]
    summary = (tmp_path / "summary.md").read_text()
    for name in names:
        assert f"| {name} |" in summary
    assert "FAIL" not in summary
    # the written problem files round-trip through the solve command
    assert main(["solve", str(tmp_path / "5.4-1.json"), "--m", "10", "--out", str(tmp_path / "r.csv")]) == 0


def test_bench_sweep_writes_table(tmp_path):
    assert main(["bench", "--suite", "5.4-3", "--sweep", "--out-dir", str(tmp_path)]) == 0
    header, rows = _rows((tmp_path / "sweep.csv").read_text())
    assert header == ["case", "m", "max_abs_err", "trend"]
    errs = [float(r[2]) for r in rows]
    assert [int(r[1]) for r in rows] == [500, 1000, 2000]
    assert errs[0] > errs[1] > errs[2]
    assert all(r[3] == "decreasing" for r in rows)


def test_bench_threshold_exceeded_exit_3(tmp_path, monkeypatch):
    import dataclasses

    real = oracle.get_cases

    def strict(selector):
        return [dataclasses.replace(c, threshold=1e-30) for c in real(selector)]

    monkeypatch.setattr(oracle, "get_cases", strict)
    assert main(["bench", "--suite", "5.4-3", "--out-dir", str(tmp_path)]) == 3
    assert (tmp_path / "5.4-3.csv").exists()
    assert "FAIL" in (tmp_path / "summary.md").read_text()


def test_bench_unknown_suite_exit_1(tmp_path):
    assert main(["bench", "--suite", "9", "--out-dir", str(tmp_path)]) == 1


def test_verify_passes(capsys):
    assert main(["verify", "--alphas", "0.5,1,2.5", "--m", "64"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3
    assert "first-order matrices exact: True" in out


def test_verify_single_interval():
    assert main(["verify", "--alphas", "0.3,1,1.7", "--m", "1"]) == 0


def test_verify_rejects_bad_orders():
    assert main(["verify", "--alphas", "0.5,-1"]) == 1
    assert main(["verify", "--alphas", ","]) == 1


def test_verify_alpha_report():
    r = verify_alpha(1.0, 16)
    assert r["first_order_exact"] is True
    assert r["closed_form"] == 0.0


def test_integrate_half_order(capsys):
    rc = main(["integrate", "t", "--alpha", "0.5", "--m", "8", "--exact", "gamma(2)/gamma(2.5)*t^1.5"])
    assert rc == 0
    out = capsys.readouterr().out
    norm = float(out.strip().split("\n")[-1].split(":")[1])
    assert norm <= 1e-15
    assert out.startswith("t,j_hf,j_exact,abs_err\n")


def test_integrate_fourth_order_exact(capsys):
    assert main(["integrate", "t", "--alpha", "4", "--m", "8", "--exact", "t^5/120"]) == 0
    out = capsys.readouterr().out
    assert out.strip().split("\n")[-1] == "inf-norm error: 0.000000e+00"


def test_integrate_zero(capsys):
    assert main(["integrate", "0", "--alpha", "2.2", "--m", "5"]) == 0
    _, rows = _rows(capsys.readouterr().out)
    assert all(float(r[1]) == 0.0 for r in rows)


def test_integrate_input_errors():
    assert main(["integrate", "t +", "--alpha", "0.5", "--m", "8"]) == 1
    assert main(["integrate", "1/t", "--alpha", "0.5", "--m", "8"]) == 1
    assert main(["integrate", "t", "--alpha", "60", "--m", "8"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["integrate", "t", "--alpha", "0", "--m", "8"],
        ["solve", "x.json", "--m", "0"],
        ["solve", "x.json"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_console_entry_point_matches_module():
    rc, out, _ = run("verify", "--alphas", "1", "--m", "3")
    assert rc == 0 and "PASS" in out
