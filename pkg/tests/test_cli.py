import json

import pytest

from qtcensus import automata
from qtcensus.cli import run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_scan_json(capsys):
    code, out, _ = _run(capsys, "scan", "--oracle", "squarefree", "--n", "2", "--y-hi", "10000", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["result"]["distinct"] == 8
    assert report["config"]["command"] == "scan"
    assert report["config"]["caps"]["window_cap"] == 1 << 26


def test_scan_csv(capsys):
    code, out, _ = _run(capsys, "scan", "--oracle", "primes", "--n", "2", "--y-hi", "100", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# config: ") and lines[1] == "profile,multiplicity"
    assert sum(int(l.split(",")[1]) for l in lines[2:]) == 100


def test_report_byte_determinism(capsys, tmp_path):
    outs = []
    for _ in range(2):
        path = tmp_path / "r.json"
        assert run(["--output", str(path), "scan", "--oracle", "primes", "--n", "4", "--y-hi", "5000"]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_construct_and_verify(capsys, tmp_path):
    code, out, _ = _run(capsys, "construct", "--n", "3", "--t", "1,3,5,7")
    assert code == 0
    w = json.loads(out)["result"]
    assert (w["y0"], w["qPrime"], w["verified"]) == (668, 900, True)
    good = tmp_path / "w.json"
    good.write_text(out)
    assert _run(capsys, "verify", "--witness", str(good))[0] == 0
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(w))
    assert _run(capsys, "verify", "--replay", str(bare))[0] == 0
    w["y"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(w))
    code, _, err = _run(capsys, "verify", "--witness", str(bad))
    assert code == 1 and "verification failed" in err


def test_construct_empty_target(capsys):
    code, out, _ = _run(capsys, "construct", "--n", "2", "--t", "")
    assert code == 0 and json.loads(out)["result"]["T"] == []


def test_usage_errors(capsys):
    code, _, err = _run(capsys, "construct", "--n", "3", "--t", "1,4")
    assert code == 2 and "4" in err
    assert _run(capsys, "scan", "--oracle", "automaton", "--n", "2", "--y-hi", "5")[0] == 2
    assert _run(capsys, "verify", "--witness", "/nonexistent/file.json")[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_budget_errors(capsys):
    assert _run(capsys, "construct", "--n", "6", "--t", "1")[0] == 3
    assert _run(capsys, "scan", "--oracle", "squarefree", "--n", "4", "--y-hi", str(2**60))[0] == 3
    assert _run(capsys, "--work-cap", "100", "residuals", "--oracle", "primes", "--n", "5", "--d", "5")[0] == 3
    code, _, _ = _run(capsys, "--window-cap", "64", "scan", "--oracle", "primes", "--n", "3", "--y-hi", "100", "--chunk-y", "50")
    assert code == 3


def test_env_cap_override(capsys, monkeypatch):
    monkeypatch.setenv("QTCENSUS_WORK_CAP", "10")
    assert _run(capsys, "residuals", "--oracle", "primes", "--n", "2", "--d", "2")[0] == 3


def test_profiles_richness_coverage_residuals(capsys):
    code, out, _ = _run(capsys, "profiles", "--oracle", "squarefree", "--n", "2", "--y", "2")
    assert code == 0 and json.loads(out)["result"]["members"] == [2, 3]
    code, out, _ = _run(capsys, "richness", "--x", "1000", "--n", "3")
    assert code == 0 and json.loads(out)["result"]["richBoundHolds"]
    code, out, _ = _run(capsys, "coverage", "--n", "2", "--y-bound", "10000")
    assert code == 0 and json.loads(out)["result"]["coverage"] == 1.0
    code, out, _ = _run(capsys, "residuals", "--oracle", "squarefree", "--n", "2", "--d", "4")
    assert code == 0 and json.loads(out)["result"]["distinctCount"] == 6


def test_explicit_oracle(capsys):
    code, out, _ = _run(capsys, "profiles", "--oracle", "explicit", "--members", "1,5,6", "--cutoff", "16", "--n", "2", "--y", "1")
    assert code == 0 and json.loads(out)["result"]["members"] == [1, 2]
    assert _run(capsys, "profiles", "--oracle", "explicit", "--cutoff", "4", "--n", "2", "--y", "1")[0] == 2


def test_automaton_command(capsys, tmp_path):
    path = tmp_path / "odd.aut"
    path.write_text(
        "states e o\nstart e\naccept o\n"
        "delta e 0 = atom e\ndelta e 1 = atom o\ndelta o 0 = atom o\ndelta o 1 = atom o\n"
    )
    code, out, _ = _run(capsys, "automaton", "--file", str(path), "--depth", "3", "--word", "001", "--word", "1",
                        "--profile-order", "2", "--suffix-max", "6")
    r = json.loads(out)["result"]
    assert code == 0
    assert r["census"] == [1, 2, 2, 2] and r["accepts"] == {"001": True, "1": True}
    assert r["profileBound"]["holds"]
    code, out, _ = _run(capsys, "automaton", "--random-alternating", "3", "--seed", "5", "--dump")
    r = json.loads(out)["result"]
    assert code == 0
    assert r["class"] == "deterministic" or "over-approximation" in r["censusNote"]
    assert automata.loads(r["automaton"])
    path.write_text("states a\nstart a\n")
    assert _run(capsys, "automaton", "--file", str(path))[0] == 2


def test_automaton_oracle_scan(capsys, tmp_path):
    path = tmp_path / "a.aut"
    path.write_text(automata.dumps(automata.tree_dfa(lambda w: w.value % 3 == 0, 6)))
    code, out, _ = _run(capsys, "scan", "--oracle", "automaton", "--automaton", str(path), "--n", "2", "--y-hi", "16")
    assert code == 0 and json.loads(out)["result"]["distinct"] >= 1
