import csv
import io
import math
import shutil
from pathlib import Path

from steinerq.cli import EXIT_GUARD, EXIT_INFEASIBLE, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, main
from steinerq.stp import parse_stp, write_stp

DATA = Path(__file__).parent / "data"
CORPUS = Path(__file__).parent.parent / "corpus"


def stp(body: str) -> str:
    return "33D32945 STP File, STP Format Version 1.0\n" + body + "EOF\n"


def test_solve_two_terminals(capsys):
    assert main(["solve", str(DATA / "hand_path.stp")]) == EXIT_OK
    assert "weight=9" in capsys.readouterr().out


def test_solve_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.stp"
    bad.write_text(stp("SECTION Graph\nNodes 3\nEND\nSECTION Terminals\nT 99\nEND\n"))
    assert main(["solve", str(bad)]) == EXIT_PARSE
    assert "line 6" in capsys.readouterr().err


def test_solve_infeasible(tmp_path):
    p = tmp_path / "dis.stp"
    p.write_text(stp("SECTION Graph\nNodes 3\nE 1 2 1\nEND\nSECTION Terminals\nT 1\nT 3\nEND\n"))
    assert main(["solve", str(p)]) == EXIT_INFEASIBLE


def test_oracle_guard():
    assert main(["solve", "--algorithm", "oracle", "--gen", "30,4,0.3,10"]) == EXIT_GUARD


def test_hybrid_matches_dw(capsys, tmp_path):
    main(["solve", "--algorithm", "dw", "--gen", "10,5,0.4,10", "--seed", "4"])
    dw = capsys.readouterr().out.split()[2]
    main(["solve", "--algorithm", "hybrid", "--gen", "10,5,0.4,10", "--seed", "4", "--out", str(tmp_path)])
    hy = capsys.readouterr().out.split()[2]
    assert dw == hy
    assert (tmp_path / "results.csv").exists() and (tmp_path / "results.json").exists()


def test_solve_is_deterministic(capsys):
    args = ["solve", "--algorithm", "hybrid", "--gen", "9,4,0.4,10", "--seed", "2", "--count", "2"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    strip = lambda s: [line.split(" time_ms")[0] for line in s.splitlines()]
    assert strip(capsys.readouterr().out) == strip(first)


def test_verify_shipped_corpus(capsys):
    assert len(list(CORPUS.glob("*.stp"))) == 200
    assert main(["verify", str(CORPUS)]) == EXIT_OK
    assert "200 instances, 0 mismatches" in capsys.readouterr().out


def test_verify_corrupted_optimum(tmp_path, capsys):
    for f in sorted(CORPUS.glob("*.stp"))[:5]:
        shutil.copy(f, tmp_path)
    victim = sorted(tmp_path.glob("*.stp"))[2]
    inst = parse_stp(victim.read_text())
    inst.optimum += 1
    victim.write_text(write_stp(inst))
    assert main(["verify", str(tmp_path)]) == EXIT_MISMATCH
    assert inst.name in capsys.readouterr().out


def test_verify_empty(tmp_path, capsys):
    assert main(["verify", str(tmp_path)]) == EXIT_OK
    assert "0 instances" in capsys.readouterr().out


def test_verify_generated_corpus_with_jobs():
    assert main(["verify", "--corpus", "12", "--seed", "3", "--jobs", "2"]) == EXIT_OK


def test_bench_level1_matches_prediction(capsys):
    assert main(["bench", "--k", "4-8", "--epsilon", "0.125", "--a-cap", "1"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [int(r["k"]) for r in rows] == [4, 5, 6, 7, 8]
    for r in rows:
        assert int(r["level1_N"]) == int(r["pred_level1_N"])


def test_bench_dh_constant_doubles(capsys):
    main(["bench", "--k", "6", "--count", "2"])
    one = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    main(["bench", "--k", "6", "--count", "2", "--dh-constant", "2"])
    two = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(one) == 2
    for a, b in zip(one, two):
        N = int(a["level1_N"])
        assert int(a["level1_q"]) == math.ceil(math.sqrt(N) - 1e-12)
        assert int(b["level1_q"]) == math.ceil(2 * math.sqrt(N) - 1e-12)
        assert a["classical_evals"] == b["classical_evals"]


def test_analyze_default(capsys):
    assert main(["analyze"]) == EXIT_OK
    out = capsys.readouterr().out
    beta = float(out.split("beta*=")[1].split()[0])
    assert abs(beta - 0.28325) < 1e-4
    assert "note:" in out


def test_analyze_levels_four_and_point(capsys):
    main(["analyze", "--levels", "4"])
    head = capsys.readouterr().out.splitlines()[1]
    assert float(head.split("quantum ")[1]) >= 0.875
    main(["analyze", "--beta", "0.5", "--levels", "3"])
    out = capsys.readouterr().out
    assert "classical exponent 0.668564" in out and "quantum exponent   0.875000" in out


def test_analyze_csv(capsys):
    main(["analyze", "--csv"])
    assert "levels,beta,classical_exponent" in capsys.readouterr().out


def test_splits_report(capsys):
    assert main(["splits", str(DATA / "hand_path.stp")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "optimality-failures=0" in out and "witness" in out


def test_splits_corpus_sweep(capsys):
    files = [str(f) for f in sorted(CORPUS.glob("*.stp"))[:20]]
    assert main(["splits", *files]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("optimality-failures=0") == 20
    # only single-edge trees (two splits) may lack a witness: neither split puts one terminal on the left
    lines = out.splitlines()
    for prev, line in zip(lines, lines[1:]):
        if "no witness" in line:
            assert "splits=2 " in prev
