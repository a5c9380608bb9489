import json

import pytest

from idgames import cli
from idgames.game import GameFunction, Scenario


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_enumerate_formats(capsys):
    status, out, _ = run(capsys, "enumerate", "--scenario", "2,2,2")
    assert status == 0
    doc = json.loads(out)
    assert sum(size for _, size in doc["classes"]) == 256
    status, out, _ = run(capsys, "enumerate", "--scenario", "2,2,2", "--format", "csv")
    assert out.startswith("code,orbit_size\n")


def test_bounds(capsys):
    status, out, _ = run(capsys, "bounds", "--game", "addition", "--restarts", "3")
    assert status == 0
    doc = json.loads(out)
    assert doc["omega_cl"]["num"] == 3 and doc["omega_cl"]["den"] == 8
    assert doc["omega_ns"]["decimal"] == "0.5"
    assert 0.375 <= doc["omega_q_lower"] <= 0.5
    status, out, _ = run(capsys, "bounds", "--game", "addition", "--restarts", "1",
                         "--format", "text")
    assert out.splitlines()[:2] == ["omega_cl 3/8", "omega_ns 1/2"]


def test_bounds_from_file(tmp_path, capsys):
    f = GameFunction.constant(Scenario.parse("2,2,3"), 0)
    path = tmp_path / "g.json"
    from idgames.game import game_to_document
    path.write_text(json.dumps(game_to_document(f)))
    status, out, _ = run(capsys, "bounds", "--game", str(path))
    assert status == 0
    doc = json.loads(out)
    assert doc["omega_cl"]["decimal"] == "1" and "omega_q_lower" not in doc


def test_census_and_out_file(tmp_path, capsys):
    out = tmp_path / "c.json"
    status, stdout, _ = run(capsys, "census", "--scenario", "2,2,2", "--out", str(out),
                            "--threads", "1")
    assert status == 0 and stdout == ""
    assert json.loads(out.read_text())["nontrivial_class_count"] == 0


def test_outputs_are_reproducible(capsys):
    a = run(capsys, "quantum", "--game", "facet", "--restarts", "3", "--seed", "2")[1]
    b = run(capsys, "quantum", "--game", "facet", "--restarts", "3", "--seed", "2")[1]
    assert a == b
    c1 = run(capsys, "census", "--scenario", "2,2,2", "--threads", "1")[1]
    c2 = run(capsys, "census", "--scenario", "2,2,2", "--threads", "2")[1]
    assert c1 == c2


def test_quantum(capsys):
    status, out, _ = run(capsys, "quantum", "--game", "tripartite", "--restarts", "5")
    assert status == 0
    doc = json.loads(out)
    assert doc["dims"] == [2, 2, 2]
    assert doc["value"] > 0.375


def test_counting(capsys):
    status, out, _ = run(capsys, "counting", "--m-max", "40", "--sample-m", "2",
                         "--samples", "20")
    assert status == 0
    doc = json.loads(out)
    assert len(doc["curve"]) == 40 and doc["sample"]["samples"] == 20
    status, out, _ = run(capsys, "counting", "--m-max", "3", "--format", "csv")
    assert out.splitlines()[0] == "m,log_fraction_bound"


def test_verify_paper_subset(capsys, caplog):
    status, out, _ = run(capsys, "verify-paper", "--only", "1,5")
    assert status == 0
    assert [r["passed"] for r in json.loads(out)] == [True, True]
    assert "PASS criterion 1" in caplog.text


@pytest.mark.parametrize("argv, code, status", [
    (["census"], "missing-scenario", 2),
    (["census", "--scenario", "2,x,2"], "bad-scenario", 2),
    (["census", "--scenario", "2,4,4"], "too-large", 4),
    (["bounds"], "missing-game", 2),
    (["bounds", "--game", "nosuchgame"], "game-not-found", 3),
    (["quantum", "--game", "facet", "--dims", "2"], "bad-dims", 2),
    (["quantum", "--game", "facet", "--format", "csv"], "bad-format", 2),
    (["quantum", "--game", "facet", "--restarts", "0"], "bad-restarts", 2),
    (["census", "--scenario", "2,2,2", "--threads", "0"], "bad-threads", 2),
    (["counting", "--omega", "2"], "bad-number", 2),
    (["counting", "--omega", "abc"], "bad-number", 2),
])
def test_errors(capsys, argv, code, status):
    got, out, err = run(capsys, *argv)
    assert got == status
    assert err.startswith(f"error[{code}]")
    assert out == ""


def test_bad_game_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    status, _, err = run(capsys, "bounds", "--game", str(p))
    assert status == 3 and err.startswith("error[bad-game]")


def test_thread_env(monkeypatch, capsys):
    monkeypatch.setenv(cli.THREADS_ENV, "zero")
    status, _, err = run(capsys, "census", "--scenario", "2,2,2")
    assert status == 2 and "bad-threads" in err
    monkeypatch.setenv(cli.THREADS_ENV, "2")
    assert cli.default_threads() == 2


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "idgames", "enumerate", "--scenario", "2,2,2",
                        "--format", "text"], capture_output=True, text=True)
    assert r.returncode == 0 and len(r.stdout.splitlines()) == 6
