from pathlib import Path

import pytest

from smkit.cli import main
from smkit.presentations import load_grp
from smkit.smio import load_sm

MACHINES = Path(__file__).resolve().parent.parent / "machines"
Z = str(MACHINES / "adding.sm")
EVEN = str(MACHINES / "even.sm")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_adding_trace(capsys):
    code, out, _ = run(capsys, "adding", "--alphabet", "a", "--word", "a0", "--trace")
    assert code == 0
    assert "steps: 4" in out and "L a0 p1 R" in out


def test_adding_dumps_machine(capsys):
    code, out, _ = run(capsys, "adding", "--alphabet", "a b")
    assert code == 0 and "rule r13:" in out


def test_area_missing_file(capsys):
    code, _, err = run(capsys, "area", "missing.grp", "--word", "x")
    assert code == 2 and err


def test_run_negative_input_not_found(capsys):
    code, out, _ = run(
        capsys, "run", Z, "--start", "L a0^-1 p1 R", "--accept", "L a0^-1 p3 R", "--max-steps", 200, "--max-space", 12
    )
    assert code == 1 and out.startswith("not_found")


def test_run_found(capsys):
    code, out, _ = run(capsys, "run", Z, "--start", "L a0 a0 p1 R", "--accept-states", "L p3 R", "--max-space", 5)
    assert code == 0 and "steps: 11" in out


def test_usage_errors(capsys):
    assert run(capsys, "run", Z, "--start", "L p1 R")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "run", Z, "--start", "L q R", "--accept", "L p3 R")[0] == 2
    assert run(capsys)[0] == 2


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_area(capsys, tmp_path):
    code, out, _ = run(capsys, "area", MACHINES / "z2.grp", "--word", "a b a^-1 b^-1", "--witness")
    assert code == 0 and "area: 1" in out and "insert" in out
    code, out, _ = run(capsys, "area", MACHINES / "z2.grp", "--word", "a", "--budget", 2)
    assert code == 1 and "unknown" in out
    code, out, _ = run(capsys, "area", "--preset", "shift2", "--word", "t1^-1 k t1 a^-1 k^-1")
    assert code == 0 and "area: 1" in out


def test_miller(capsys, tmp_path):
    out_path = tmp_path / "m.sm"
    code, out, _ = run(capsys, "miller", MACHINES / "c2.grp", "-o", out_path, "--word", "x x", "--max-space", 8)
    assert code == 0 and "steps:" in out
    assert [r.name for r in load_sm(out_path).rules] == ["t.x", "t.r1"]
    code, out, _ = run(capsys, "miller", MACHINES / "c2.grp", "-o", out_path, "--word", "x", "--max-space", 6, "--max-frontier", 2000)
    assert code == 1 and out.startswith("unknown")


def test_compile(capsys, tmp_path):
    out_path = tmp_path / "e.sm"
    code, _, err = run(capsys, "compile", MACHINES / "erase.tm", "-o", out_path)
    assert code == 0 and "rules" in err
    assert load_sm(out_path).N == 9


def test_hub_and_higman(capsys, tmp_path):
    h = tmp_path / "h.grp"
    assert run(capsys, "hub", EVEN, "--copies", 9, "-o", h)[0] == 0
    assert len(load_grp(h).generators) == 81
    assert run(capsys, "hub", EVEN, "--copies", 3, "-o", h)[0] == 2
    g = tmp_path / "g.grp"
    code, _, err = run(capsys, "higman", EVEN, "--alphabet", "x", "-o", g)
    assert code == 0 and "amalgam: 221" in err
    assert len(load_grp(g).generators) == 221
    run(capsys, "higman", EVEN, "--alphabet", "x", "--merged", "-o", g)
    assert len(load_grp(g).generators) == 167


def test_trapezium(capsys, tmp_path):
    dot = tmp_path / "t.dot"
    code, out, _ = run(capsys, "trapezium", EVEN, "--start", "q1 x x q2", "--history", "e f", "--dot", dot)
    assert code == 0 and "verify: ok" in out and "area: 4" in out
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "trapezium", EVEN, "--start", "q1 x q2", "--history", "f")
    assert code == 1 and "not applicable" in out


def test_disc(capsys, tmp_path):
    dot = tmp_path / "d.dot"
    code, out, _ = run(capsys, "disc", EVEN, "--start", "q1 x x q2", "--dot", dot, "--max-space", 8)
    assert code == 0 and "disc area: 37" in out and "verify: ok" in out
    assert "hub" in dot.read_text()
    code, out, _ = run(capsys, "disc", EVEN, "--start", "q1 x q2", "--max-space", 8, "--max-steps", 20)
    assert code == 1 and "not_found" in out


def test_bench_and_fit(capsys, tmp_path):
    csv = tmp_path / "b.csv"
    args = ["bench", Z, "--inputs", MACHINES / "adding_inputs.txt", "--accept-states", "L p3 R", "--max-space", 8, "--csv", csv]
    assert run(capsys, *args)[0] == 0
    first = csv.read_text()
    run(capsys, *args)
    assert csv.read_text() == first
    assert first.splitlines()[1:] == ["1,4,4,1", "2,11,5,1", "3,26,6,1", "4,57,7,1"]
    code, out, _ = run(capsys, "fit", "--csv", csv, "--candidate", "2^n")
    assert code == 0 and out.startswith("C = ")
    code, out, _ = run(capsys, "fit", "--csv", csv, "--candidate", "n", "--cmax", 2)
    assert code == 1 and "none" in out


def test_bench_unaccepted_exit(capsys, tmp_path):
    inputs = tmp_path / "in.txt"
    inputs.write_text("L a0 p1 R\nL a0^-1 p1 R\n")
    code, out, _ = run(
        capsys, "bench", Z, "--inputs", inputs, "--accept-states", "L p3 R", "--max-space", 6, "--max-steps", 30
    )
    assert code == 1 and out.splitlines()[2] == "1,,,0"


def test_fit_bad_candidate(capsys, tmp_path):
    csv = tmp_path / "b.csv"
    csv.write_text("n,steps,space,accepted\n1,4,4,1\n")
    assert run(capsys, "fit", "--csv", csv, "--candidate", "sin n")[0] == 2
