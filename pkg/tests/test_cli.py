"""End-to-end exercises of the command-line interface, in process."""

import io
import json
import math

import pytest

from specfact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def out_lines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


def test_constants(capsys):
    code, out, _ = run(capsys, "constants")
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"K", "K0", "C2", "C_inf"}
    assert obj["K0"] < 1.25
    assert obj["C_inf"] == pytest.approx(2 * obj["K0"], rel=1e-14)


def test_factorize_boundary_constant_file(tmp_path, capsys):
    path = tmp_path / "flat.txt"
    path.write_text("4 4 4 4 4 4 4 4\n")
    code, out, _ = run(capsys, "factorize", str(path), "--method", "boundary")
    assert code == 0
    obj = json.loads(out)
    assert obj["method"] == "boundary"
    assert obj["outer"]["pass"] is True
    a = obj["a"]
    assert a[0][0] == pytest.approx(2.0, rel=1e-12)
    assert abs(a[0][1]) < 1e-12
    assert sum(abs(re) + abs(im) for re, im in a[1:]) < 1e-8


def test_factorize_boundary_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("4, 4, 4, 4, 4, 4, 4, 4"))
    code, out, _ = run(capsys, "factorize", "--method", "boundary")
    assert code == 0
    assert json.loads(out)["a"][0][0] == pytest.approx(2.0, rel=1e-12)


def test_factorize_fejer_riesz_series(tmp_path, capsys):
    series = {"coeffs": {"0": [1.25, 0.0], "1": [-0.5, 0.0],
                         "-1": [-0.5, 0.0]}}
    path = tmp_path / "series.json"
    path.write_text(json.dumps(series))
    code, out, _ = run(capsys, "factorize", str(path),
                       "--method", "fejer-riesz")
    assert code == 0
    obj = json.loads(out)
    a = obj["a"]
    assert len(a) == 2
    assert a[0][0] == pytest.approx(1.0, abs=1e-9)
    assert a[1][0] == pytest.approx(-0.5, abs=1e-9)
    assert obj["outer"]["pass"] is True


def test_factorize_fejer_riesz_rejects_grid(tmp_path, capsys):
    path = tmp_path / "flat.txt"
    path.write_text("4 4 4 4 4 4 4 4\n")
    code, _, err = run(capsys, "factorize", str(path),
                       "--method", "fejer-riesz")
    assert code == 2
    assert "series" in err


def test_factorize_nonpositive(tmp_path, capsys):
    n = 256
    theta = [(-math.pi + 2 * math.pi * j / n) for j in range(n)]
    path = tmp_path / "dips.txt"
    path.write_text("\n".join(f"{math.cos(t):.17g}" for t in theta))
    code, _, err = run(capsys, "factorize", str(path), "--method", "boundary")
    assert code == 3
    assert "domain" in err
    # a clamp above the range keeps the density smooth; a binding clamp
    # would add corners whose aliasing honestly fails the 1e-8 outer gate
    code, out, _ = run(capsys, "factorize", str(path),
                       "--method", "boundary", "--floor", "2.0")
    assert code == 0
    obj = json.loads(out)
    assert obj["outer"]["pass"] is True
    assert obj["a"][0][0] == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_parse_failures(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "factorize", str(bad), "--method", "boundary")[0] == 2
    assert run(capsys, "factorize", str(tmp_path / "missing.txt"),
               "--method", "boundary")[0] == 2
    words = tmp_path / "words.txt"
    words.write_text("one two three")
    assert run(capsys, "factorize", str(words), "--method", "boundary")[0] == 2


def test_bounds_pair_from_files(tmp_path, capsys):
    n = 256
    fp = tmp_path / "f.json"
    gp = tmp_path / "g.json"
    theta = [(-math.pi + 2 * math.pi * j / n) for j in range(n)]
    fp.write_text(json.dumps(
        {"n": n, "values": [2 + math.cos(t) for t in theta]}))
    gp.write_text(json.dumps(
        {"n": n, "values": [2 + 0.9 * math.cos(t) for t in theta]}))
    code, out, _ = run(capsys, "bounds", str(fp), str(gp), "--check", "thm2")
    assert code == 0
    obj = json.loads(out)
    assert obj["name"] == "thm2" and obj["pass"] is True
    assert run(capsys, "bounds", str(fp), str(gp), "--check", "identity")[0] == 0


def test_bounds_lemma_single_input(tmp_path, capsys):
    n = 256
    pp = tmp_path / "psi.json"
    theta = [(-math.pi + 2 * math.pi * j / n) for j in range(n)]
    pp.write_text(json.dumps(
        {"n": n, "values": [0.3 * math.sin(2 * t) for t in theta]}))
    code, out, _ = run(capsys, "bounds", str(pp), "--check", "lemma-l1")
    assert code == 0
    assert json.loads(out)["pass"] is True
    # pair checks refuse a single input
    assert run(capsys, "bounds", str(pp), "--check", "cor-p")[0] == 2


def test_bounds_sweep_deterministic(capsys):
    argv = ("bounds", "--check", "identity", "--sweep", "4",
            "--seed", "3", "--n", "512", "--jobs", "2")
    code, out1, err = run(capsys, *argv)
    assert code == 0
    rows = out_lines(out1)
    assert [r["trial"] for r in rows] == [0, 1, 2, 3]
    assert all(r["pass"] for r in rows)
    assert "4/4" in err
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2
    # sweep and explicit inputs are mutually exclusive
    assert run(capsys, "bounds", "f.json", "--check", "identity",
               "--sweep", "2")[0] == 2


def test_counterexample_single(capsys):
    code, out, _ = run(capsys, "counterexample", "--n", "1")
    assert code == 0
    row = json.loads(out)
    assert row["n"] == 1 and row["pass"] is True
    assert row["log_l1_diff"] == pytest.approx(0.5, rel=1e-12)


def test_counterexample_sweep_rows(capsys):
    code, out, _ = run(capsys, "counterexample", "--sweep", "3")
    assert code == 0
    rows = out_lines(out)
    assert [r["n"] for r in rows] == [1, 2, 3]
    h2 = [r["h2_lower"] for r in rows]
    assert h2[0] < h2[1] < h2[2]
    l1 = [r["l1_diff"] for r in rows]
    assert l1[0] > l1[1] > l1[2]


def test_counterexample_budget_and_usage(capsys):
    code, _, err = run(capsys, "counterexample", "--n", "50")
    assert code == 4
    assert "budget" in err
    assert run(capsys, "counterexample")[0] == 2
    assert run(capsys, "counterexample", "--n", "1", "--sweep", "2")[0] == 2
