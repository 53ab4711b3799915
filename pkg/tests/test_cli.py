import csv
import json

import pytest

from addspan.cli import main, summary_row


def run(*argv):
    return main([str(a) for a in argv])


def edge_lines(path):
    return [ln for ln in path.read_text().splitlines() if ln and not ln.startswith("#")]


def test_gen_path(tmp_path, capsys):
    out = tmp_path / "p.txt"
    assert run("gen", "--kind", "path", "--n", 5, "--out", out) == 0
    assert edge_lines(out) == ["0 1", "1 2", "2 3", "3 4"]
    assert "n=5 m=4" in capsys.readouterr().out


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run("gen", "--kind", "gnm", "--n", 100, "--m", 300, "--seed", 1, "--out", a)
    run("gen", "--kind", "gnm", "--n", 100, "--m", 300, "--seed", 1, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_gen_grid(tmp_path):
    out = tmp_path / "g.txt"
    run("gen", "--kind", "grid", "--rows", 10, "--cols", 10, "--out", out)
    assert len(edge_lines(out)) == 180


def test_gen_invalid(capsys):
    assert run("gen", "--kind", "gnm", "--n", 4, "--m", 100) == 2
    with pytest.raises(SystemExit) as e:
        run("gen", "--kind", "hexagon", "--n", 4)
    assert e.value.code == 2


def test_build_sublinear_on_path(tmp_path):
    g, h, lg = tmp_path / "g.txt", tmp_path / "h.txt", tmp_path / "log.json"
    run("gen", "--kind", "path", "--n", 100, "--out", g)
    assert run("build", "--graph", g, "--alg", "sublinear", "--k", 2, "--eps", 0.25, "--out", h, "--log", lg) == 0
    assert len(edge_lines(h)) == 99
    log = json.loads(lg.read_text())
    assert log["schema"] == 1 and log["edges"] == 99 and log["tags"] == {"tree": 99}


def test_build_subset_single_terminal(tmp_path):
    u = tmp_path / "u.txt"
    u.write_text("3\n")
    lg = tmp_path / "log.json"
    assert run("build", "--kind", "grid", "--rows", 5, "--cols", 5, "--alg", "subset", "--terminals", u,
               "--log", lg) == 0
    assert json.loads(lg.read_text())["build"]["terminals"] == 1


def test_build_additive_0403_schedule(tmp_path):
    lg = tmp_path / "log.json"
    assert run("build", "--kind", "gnm", "--n", 300, "--m", 1200, "--alg", "additive", "--preset", "0403",
               "--log", lg) == 0
    sched = json.loads(lg.read_text())["build"]["schedule"]
    assert sched["K"] == 3 and sched["rhos"][-1] < 0.403 and all(sched["side_condition"])


def test_build_pairs_with_labels(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("a b\nb c\nc d\nd e\n")
    p = tmp_path / "p.txt"
    p.write_text("a e\n")
    h = tmp_path / "h.txt"
    assert run("build", "--graph", g, "--alg", "pairwise", "--pairs", p, "--out", h, "--log", tmp_path / "l") == 0
    assert edge_lines(h) == ["a b", "b c", "c d", "d e"]
    p.write_text("a zz\n")
    assert run("build", "--graph", g, "--alg", "pairwise", "--pairs", p) == 2


@pytest.mark.parametrize("argv", [
    ["build", "--alg", "allpairs6"],  # no input
    ["build", "--kind", "path", "--n", 5, "--graph", "x", "--alg", "allpairs6"],  # two inputs
    ["build", "--kind", "path", "--n", 5, "--alg", "pairwise"],  # missing pairs
    ["build", "--kind", "path", "--n", 5, "--alg", "sublinear", "--eps", 2],
    ["build", "--kind", "path", "--n", 5, "--alg", "sparsify", "--d", 9],
    ["build", "--kind", "path", "--n", 5, "--alg", "allpairs6", "--threads", 0],
    ["build", "--graph", "/nonexistent/file", "--alg", "allpairs6"],
])
def test_build_usage_errors(argv):
    assert run(*argv) == 2


def test_threads_env(monkeypatch, tmp_path):
    lg = tmp_path / "l.json"
    monkeypatch.setenv("ADDSPAN_THREADS", "3")
    assert run("build", "--kind", "path", "--n", 5, "--alg", "allpairs6", "--log", lg) == 0
    assert json.loads(lg.read_text())["threads"] == 3
    monkeypatch.setenv("ADDSPAN_THREADS", "many")
    assert run("build", "--kind", "path", "--n", 5, "--alg", "allpairs6") == 2


def test_probabilistic_failure_exit(monkeypatch):
    import addspan.cli as cli
    from addspan.result import ProbabilisticFailure

    def boom(*a, **k):
        raise ProbabilisticFailure("sample missed")

    monkeypatch.setattr(cli, "build_sublinear", boom)
    assert run("build", "--kind", "path", "--n", 5, "--alg", "sublinear") == 3


def test_verify_roundtrip(tmp_path):
    g, h, rep = tmp_path / "g.txt", tmp_path / "h.txt", tmp_path / "r.json"
    run("gen", "--kind", "gnm", "--n", 200, "--m", 800, "--seed", 2, "--out", g)
    run("build", "--graph", g, "--alg", "allpairs6", "--out", h, "--log", tmp_path / "l")
    assert run("verify", "--graph", g, "--spanner", h, "--report", rep, "--max-error", 6,
               "--csv", tmp_path / "r.csv") == 0
    r = json.loads(rep.read_text())
    assert r["max_error"] <= 6 and r["audit"]["ok"] and r["schema"] == 1
    assert run("verify", "--graph", g, "--spanner", g, "--report", rep) == 0
    assert json.loads(rep.read_text())["max_error"] == 0


def test_verify_bridge_removed(tmp_path):
    g, h = tmp_path / "g.txt", tmp_path / "h.txt"
    g.write_text("0 1\n1 2\n2 3\n")
    h.write_text("0 1\n2 3\n")
    assert run("verify", "--graph", g, "--spanner", h, "--report", tmp_path / "r.json") == 4
    assert json.loads((tmp_path / "r.json").read_text())["max_error"] == "inf"


def test_verify_not_subgraph(tmp_path):
    g, h = tmp_path / "g.txt", tmp_path / "h.txt"
    g.write_text("0 1\n1 2\n")
    h.write_text("0 2\n")
    assert run("verify", "--graph", g, "--spanner", h, "--report", tmp_path / "r.json") == 4
    h.write_text("0 7\n")
    assert run("verify", "--graph", g, "--spanner", h) == 4


def test_bench_one_cell(tmp_path):
    out = tmp_path / "b.csv"
    assert run("bench", "--alg", "allpairs6", "--ns", 64, "--sample", 100, "--csv", out) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["row"] for r in rows] == ["data", "summary"]
    assert rows[1]["slope"] == ""
    assert float(rows[0]["max_error"]) <= 6


def test_bench_grid_slope(tmp_path):
    out = tmp_path / "b.csv"
    assert run("bench", "--alg", "sublinear", "--kind", "path", "--ns", 64, 128, 256, 512, "--seeds", 0, 1,
               "--csv", out) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 9
    # a path spanner is the path itself: |E| = n - 1
    assert float(rows[-1]["slope"]) == pytest.approx(1.0, abs=0.01)


def test_summary_row_synthetic():
    rows = [{"n": n, "edges": 3 * n, "algorithm": "x"} for n in (100, 200, 400, 800)]
    assert summary_row(rows)["slope"] == pytest.approx(1.0)


def test_bench_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["bench", "--alg", "additive", "--ns", 100, 200, "--seeds", 0, 1]
    run(*args, "--csv", a)
    run(*args, "--threads", 2, "--csv", b)
    strip = lambda p: [(r["n"], r["m"], r["edges"]) for r in csv.DictReader(p.open())]
    assert strip(a) == strip(b)
