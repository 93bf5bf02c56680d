from __future__ import annotations

import json
import math

import pytest
from conftest import cycle

from rigidcore.cli import main
from rigidcore.graph import read_edge_list, write_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_core_canon(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert run(capsys, "gen", "--n", "200", "--p", "0.03", "--seed", "4", "--out", str(g))[0] == 0
    G = read_edge_list(g)
    assert G.n == 200
    code, out, _ = run(capsys, "core", "--in", str(g))
    assert code == 0 and int(out) > 0
    code, out, _ = run(capsys, "core", "--in", str(g), "--partition")
    assert "pendant_trees" in json.loads(out)
    form = tmp_path / "f.txt"
    code, out, _ = run(capsys, "canon", "--in", str(g), "--out", str(form))
    info = json.loads(out)
    assert code == (0 if info["ok"] else 2)
    if info["ok"]:
        assert run(capsys, "iso", "--a", str(g), "--b", str(form))[0] == 0


def test_iso_exit_codes(tmp_path, capsys):
    c5 = tmp_path / "c5.txt"
    write_edge_list(cycle(5), c5)
    assert run(capsys, "iso", "--a", str(c5), "--b", str(c5))[0] == 2
    code, out, _ = run(capsys, "aut", "--in", str(c5))
    assert code == 0 and json.loads(out)["order"] == "10"


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0\n")
    code, _, err = run(capsys, "core", "--in", str(bad))
    assert code == 3 and "line 2" in err
    assert run(capsys, "core", "--in", str(tmp_path / "missing.txt"))[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["deck", "--in", str(bad)])
    assert exc.value.code == 3


def test_deck_recon(tmp_path, capsys):
    g = tmp_path / "g.txt"
    n = 60
    run(capsys, "gen", "--n", str(n), "--p", str(1.8 * math.log(n) / n), "--seed", "2", "--out", str(g))
    d = tmp_path / "deck"
    assert run(capsys, "deck", "--in", str(g), "--out", str(d))[0] == 0
    assert (d / "manifest.json").exists()
    r = tmp_path / "r.txt"
    assert run(capsys, "recon", "--deck", str(d), "--out", str(r))[0] == 0
    assert read_edge_list(r).m == read_edge_list(g).m


def test_prob_and_census(tmp_path, capsys):
    code, out, _ = run(capsys, "prob", "verify-lemma1", "--max-m", "4", "--max-k", "2", "--grid", "0.1")
    assert code == 0 and json.loads(out)["failures"] == []
    code, out, _ = run(capsys, "prob", "pi-profile", "--k", "4", "--p", "0.3", "--m-list", "1", "4")
    assert code == 0 and out.splitlines()[0].startswith("m,pi")
    g = tmp_path / "g.txt"
    run(capsys, "gen", "--n", "100", "--p", "0.06", "--out", str(g))
    code, out, _ = run(capsys, "census", "--in", str(g), "--budget", "500")
    assert code == 0 and json.loads(out)["sampled"] == 500


def test_experiment_cli(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["experiment", "core-size", "--n", "300", "--c", "8", "--trials", "4", "--seed", "9"]
    assert run(capsys, *args, "--out", str(out1))[0] == 0
    assert run(capsys, *args, "--out", str(out2), "--workers", "2")[0] == 0
    assert out1.read_bytes() == out2.read_bytes()
    code, out, _ = run(capsys, *args, "--format", "csv")
    assert out.startswith("ci95_high,")
    assert run(capsys, "experiment", "core-size", "--n", "300")[0] == 3
