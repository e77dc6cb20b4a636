import json

import pytest

from clopen.cli import main
from clopen.io import Caps, load_experiment, parse_matrix, resolve_caps, without_timestamp

O6 = {"name": "O6", "elements": ["0", "a", "b", "b'", "a'", "1"],
      "leq": [["0", "a"], ["a", "b"], ["b", "1"], ["0", "b'"], ["b'", "a'"], ["a'", "1"]],
      "ortho": [["0", "1"], ["a", "a'"], ["b", "b'"]]}

PAIR = {"matrices": {"A": [[1, 0], [0, 2]], "B": {"dimension": 2, "entries": [1, 0, 0, 3]}},
        "grid": ["0", "1", "3/2", "2", "5/2", "3", "4"]}


def run(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_lattice_check_mo2(capsys):
    code, r = run(capsys, "lattice-check", "mo:2")
    assert code == 0
    assert r["body"]["lattice"]["size"] == 6
    assert r["body"]["subalgebras"]["count"] == 3
    assert r["body"]["fibers"] == [1, 2, 2]
    assert r["header"]["schema"] == "clopen.report.v1"


def test_lattice_check_o6_fails(capsys, tmp_path):
    code, r = run(capsys, "lattice-check", write(tmp_path, "o6.json", O6))
    assert code == 2
    assert r["body"]["error"]["type"] == "NotOrthomodular"
    assert r["body"]["error"]["witness"] == ["a", "b"]


def test_projection_generator_file(capsys, tmp_path):
    spec = {"generator": "projections", "projections": [[[1, 0], [0, 0]],
                                                        [["1/2", "1/2"], ["1/2", "1/2"]]]}
    code, r = run(capsys, "lattice-check", write(tmp_path, "lines.json", spec))
    assert code == 0 and r["body"]["lattice"]["size"] == 6


def test_cap_exit_code(capsys):
    code, r = run(capsys, "lattice-check", "mo:2", "--caps", "lattice=4")
    assert code == 3 and r["body"]["error"]["type"] == "SizeCapExceeded"


def test_cap_override_from_environment(monkeypatch):
    monkeypatch.setenv("CLOPEN_CAPS", "lattice=8,budget=10")
    caps = resolve_caps("budget=20")
    assert (caps.lattice, caps.budget) == (8, 20)
    with pytest.raises(ValueError):
        Caps().update("bogus=1")


def test_theorems_and_replay(capsys, tmp_path):
    out = tmp_path / "t.json"
    code = main(["theorems", "mo:2", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    assert json.loads(out.read_text())["body"]["passed"]
    code, r = run(capsys, "theorems", "--replay", str(out))
    assert code == 0 and r["body"]["ok"] and r["body"]["replayed"] >= 5


def test_logic_heyting_and_replay(capsys, tmp_path):
    out = tmp_path / "l.json"
    main(["logic", "mo:2", "--profile", "heyting", "--out", str(out)])
    capsys.readouterr()
    stored = json.loads(out.read_text())
    ce = [e for e in stored["body"]["entries"] if e["status"] == "counterexample"]
    assert "8" in [e["id"] for e in ce]
    code, r = run(capsys, "logic", "--replay", str(out))
    assert code == 0 and r["body"]["ok"] and r["body"]["replayed"] == len(ce)


def test_reports_are_reproducible(capsys):
    _, first = run(capsys, "logic", "mo:2", "--seed", "7")
    _, second = run(capsys, "logic", "mo:2", "--seed", "7")
    assert json.dumps(without_timestamp(first), sort_keys=True) == \
        json.dumps(without_timestamp(second), sort_keys=True)


def test_bridge_experiment(capsys, tmp_path):
    code, r = run(capsys, "bridge", write(tmp_path, "e.json", PAIR))
    assert code == 0
    inj = r["body"]["injectivity"][0]
    assert inj["pair"] == ["A", "B"]
    assert inj["distinguishing points"][0] == "5/2"
    for block in r["body"]["operators"].values():
        assert block["dedekind"]["ok"] and block["round trip"]["holds"]


def test_bridge_bad_grid(capsys, tmp_path):
    bad = dict(PAIR, grid=["0", "1", "2"])
    code, r = run(capsys, "bridge", write(tmp_path, "bad.json", bad))
    assert code == 2 and r["body"]["error"]["type"] == "GridDoesNotBracketSpectrum"


def test_text_rendering(capsys):
    assert main(["lattice-check", "boolean:3"]) == 0
    out = capsys.readouterr().out
    assert "subalgebras:" in out and "count: 5" in out


def test_experiment_parsing():
    exp = load_experiment({"matrices": {"X": {"eigenpairs": [
        {"value": "-1", "projection": [["1/2", "-1/2"], ["-1/2", "1/2"]]},
        {"value": "1", "projection": [["1/2", "1/2"], ["1/2", "1/2"]]}]}},
        "grid": ["-1", "0", "2"]})
    assert len(exp.generators) == 2 and exp.pairs == []
    with pytest.raises(ValueError):
        parse_matrix({"dimension": 2, "entries": [1, 2, 3]})
