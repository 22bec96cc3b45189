from __future__ import annotations

import json
import subprocess
import sys

import pytest

import dmatroid as dm
from dmatroid.cli import main


def run_cli(args, stdin_text=None):
    proc = subprocess.run(
        [sys.executable, "-m", "dmatroid.cli", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
    )
    return proc


def test_gen_uniform_pipe_derive_stats(tmp_path):
    gen = run_cli(["gen", "uniform", "3", "6"])
    assert gen.returncode == 0
    csv_path = tmp_path / "hist.csv"
    derive = run_cli(
        ["derive", "-", "--stats", "--csv", str(csv_path)], stdin_text=gen.stdout
    )
    assert derive.returncode == 0
    payload = json.loads(derive.stdout)
    assert payload["complete"] is True
    assert payload["stats"]["size_histogram"] == {"3": 60, "4": 735}
    assert csv_path.read_text() == "size,count\n3,60\n4,735\n"


def test_gen_subcommands(tmp_path):
    for args, circuits in ((["gen", "vamos"], 41), (["gen", "q6"], 11)):
        out = run_cli(args)
        assert out.returncode == 0
        assert len(json.loads(out.stdout)["circuits"]) == circuits
    graph = tmp_path / "k4.json"
    graph.write_text(json.dumps(dm.k4_graph().to_dict()))
    out = run_cli(["gen", "graphic", str(graph)])
    assert len(json.loads(out.stdout)["circuits"]) == 7


def test_cli_output_deterministic(tmp_path):
    a = run_cli(["gen", "uniform", "2", "5"])
    b = run_cli(["gen", "uniform", "2", "5"])
    assert a.stdout == b.stdout
    d1 = run_cli(["derive", "-"], stdin_text=a.stdout)
    d2 = run_cli(["derive", "-"], stdin_text=b.stdout)
    assert d1.stdout == d2.stdout


def test_count_dependents_u36(tmp_path):
    m = tmp_path / "u36.json"
    m.write_text(json.dumps(dm.uniform(3, 6).to_dict()))
    out = run_cli(["count-dependents", str(m)])
    assert out.returncode == 0
    assert json.loads(out.stdout)["dependent_sets"] == 32252


def test_ow_derive_and_compare(tmp_path):
    first = run_cli(["ow-derive", str(dm.fixture_path("q1_f7.json")),
                     "--out", str(tmp_path / "a.json")])
    assert first.returncode == 0
    payload = json.loads((tmp_path / "a.json").read_text())
    assert payload["circuit_size_histogram"] == {"3": 64, "4": 687}
    a = tmp_path / "da.json"
    b = tmp_path / "db.json"
    a.write_text(json.dumps(payload["delta"]))
    second = run_cli(["ow-derive", str(dm.fixture_path("q2_f7.json"))])
    b.write_text(json.dumps(json.loads(second.stdout)["delta"]))
    cmp_out = run_cli(["compare", str(a), str(b)])
    verdict = json.loads(cmp_out.stdout)
    assert len(verdict["circuits_only_in_first"]) == 39
    assert len(verdict["circuits_only_in_second"]) == 39
    assert verdict["verdict"] == "incomparable"


def test_longyear_cli(tmp_path):
    m = tmp_path / "k4.json"
    m.write_text(json.dumps(dm.graphic(dm.k4_graph()).to_dict()))
    out = run_cli(["longyear", str(m), str(dm.fixture_path("k4_gf2.json"))])
    assert out.returncode == 0
    assert len(json.loads(out.stdout)["circuits"]) == 14


def test_random_rep_cli_deterministic():
    args = ["random-rep", "3", "6", "--field", "10007", "--seed", "11"]
    assert run_cli(args).stdout == run_cli(args).stdout
    rational = run_cli(["random-rep", "2", "6", "--field", "Q", "--seed", "1"])
    assert json.loads(rational.stdout)["field"] == "Q"


def test_validate_pass_and_fail(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(dm.q6().to_dict()))
    assert run_cli(["validate", str(good)]).returncode == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 3, "circuits": [[0], [0, 1]]}))
    out = run_cli(["validate", str(bad)])
    assert out.returncode == 1
    assert json.loads(out.stdout)["ok"] is False


def test_derive_limit_exit_code(tmp_path):
    m = tmp_path / "vamos.json"
    m.write_text(json.dumps(dm.vamos().to_dict()))
    out = run_cli(["derive", str(m), "--limits", "iter=1"])
    assert out.returncode == 3
    assert json.loads(out.stdout)["complete"] is False


def test_usage_error_exit_code():
    assert run_cli(["derive"]).returncode == 2
    assert run_cli(["nonsense"]).returncode == 2


def test_main_entry_direct(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(dm.uniform(2, 4).to_dict()))
    assert main(["derive", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["trace"]["fixpoint"] is True
