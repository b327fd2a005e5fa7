from __future__ import annotations

import csv
import io
import json
import random
import subprocess
import sys

import pytest

from satgame import harness
from satgame.cli import main
from satgame.engine import GameRecord
from satgame.harness import VerificationReport


def run(capsys, *argv, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_small_table_cell(capsys):
    code, out, _ = run(capsys, "solve", "--forbid", "S4", "--score", "P3", "--n", "5", "--starter", "mini")
    assert code == 0
    assert json.loads(out)["value"] == 5


def test_solve_star_score_cycle_free(capsys):
    code, out, _ = run(capsys, "solve", "--forbid", "cycles", "--score", "S5", "--n", "9", "--no-pv")
    value = json.loads(out)["value"]
    assert code == 0 and 1 <= value <= 5
    assert value == 1  # exact value from the solver


def test_solve_p6_zero(capsys):
    code, out, _ = run(capsys, "solve", "--forbid", "S4", "--score", "P6", "--n", "9", "--starter", "max")
    assert code == 0 and json.loads(out)["value"] == 0


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--forbid", "S4", "--score", "P3", "--n", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["value"] == "6"


def test_solve_cache(capsys, tmp_path):
    path = str(tmp_path / "cache.tsv")
    args = ["solve", "--forbid", "S4", "--score", "P4", "--n", "8", "--no-pv", "--cache", path]
    first = json.loads(run(capsys, *args)[1])
    second = json.loads(run(capsys, *args)[1])
    assert first["value"] == second["value"] and second["nodes_expanded"] == 0
    code, out, _ = run(capsys, "cache", "info", path)
    assert code == 0 and json.loads(out)["spec"] == "F=S4;H=P4;n=8;start=max"
    code, _, err = run(capsys, "solve", "--forbid", "S4", "--score", "P3", "--n", "8", "--cache", path)
    assert code == 2 and "cache belongs to" in err
    assert run(capsys, "cache", "clear", path)[0] == 0
    assert run(capsys, "cache", "info", path)[0] == 2


def test_table_p3_rows(capsys):
    code, out, _ = run(capsys, "table", "p3s4", "--max-n", "12")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 12 and all(r["match"] == "1" for r in rows)


def test_table_p3_parity_rows(capsys):
    code, out, _ = run(capsys, "table", "p3s4", "--max-n", "40", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and all(r["match"] for r in rows if r["n"] >= 8)


def test_table_p4_exact_cells(capsys):
    code, out, _ = run(capsys, "table", "p4s4", "--max-n", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and all(r["match"] == "1" for r in rows)
    exact = [(r["s1"], r["published_s1"]) for r in rows if not r["published_s1"].startswith("<=")]
    assert all(a == b for a, b in exact)


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--check", "table1", "--format", "json")
    rep = VerificationReport.from_json(out.strip())
    assert code == 0 and rep.verdict == "pass"
    assert rep.to_json() == out.strip()


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0 and "doublestar-boundary" in out.split()


def test_verify_gap_is_not_failure(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "verify", "--check", "doublestar-boundary", "--out", str(path))
    assert code == 0 and "finding:" in out
    assert VerificationReport.from_json(path.read_text().strip()).verdict == "gap"


def test_fuzz_command(capsys):
    code, out, _ = run(capsys, "fuzz", "--policy", "mini_p6s4", "--n", "20", "--games", "1000", "--seed", "7")
    assert code == 0 and " pass " in out


def test_fuzz_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(harness.GUARANTEES, "first_legal", lambda spec, rec: "planted")
    code, _, _ = run(capsys, "fuzz", "--policy", "first_legal", "--n", "5", "--games", "3")
    assert code == 1


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "solve", "--forbid", "S4", "--score", "P3", "--n", "9", "--max-nodes", "10")
    assert code == 3 and "budget" in err


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("SATGAME_MAX_NODES", "10")
    code, _, _ = run(capsys, "solve", "--forbid", "S4", "--score", "P3", "--n", "9")
    assert code == 3


@pytest.mark.parametrize("argv", [
    ["solve", "--forbid", "X1", "--score", "P3", "--n", "5"],
    ["solve", "--forbid", "S4", "--score", "P3"],
    ["solve", "--forbid", "S4", "--score", "P3", "--n", "0"],
    ["table", "p9s9"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_help_shows_player_mapping(capsys):
    code, out, _ = run(capsys, "solve", "--help")
    assert code == 0
    assert "index 1 is Max" in out and "index 2 is Mini" in out


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "satgame.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "exit codes" in proc.stdout


def test_output_is_byte_identical(capsys):
    argv = ["export", "--forbid", "S4", "--score", "P5", "--n", "10", "--source", "policies",
            "--max-policy", "uniform_random", "--mini-policy", "mini_p5s4", "--seed", "3"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_export_round_trips(capsys):
    code, out, _ = run(capsys, "export", "--forbid", "S4", "--score", "P3", "--n", "7", "--starter", "mini")
    rec = GameRecord.from_json(out)
    assert code == 0 and rec.to_json() == out.strip()
    assert rec.final_score == 7
    code, out, _ = run(capsys, "export", "--forbid", "S4", "--score", "P3", "--n", "7", "--format", "csv")
    assert out.splitlines()[0] == "ply,player,u,v"


def test_export_inapplicable_policy(capsys):
    code, _, err = run(capsys, "export", "--forbid", "S4", "--score", "P3", "--n", "7", "--source", "policies",
                       "--max-policy", "mini_p6s4")
    assert code == 2 and "does not apply" in err


def test_policies_listing(capsys):
    code, out, _ = run(capsys, "policies", "--format", "json")
    assert code == 0 and {r["policy"] for r in json.loads(out)} >= {"mini_p6s4", "max_t1"}


def _last_json(out: str) -> dict:
    return json.loads(out.strip().splitlines()[-1])


def test_play_forced_move(capsys, monkeypatch):
    code, out, _ = run(capsys, "play", "--forbid", "S4", "--score", "P3", "--n", "2",
                       stdin="0 1\n", monkeypatch=monkeypatch)
    rec = _last_json(out)
    assert code == 0 and rec["final_score"] == 0 and rec["moves"] == [[0, 1]]


def test_play_engine_holds_mini_value(capsys, monkeypatch):
    pairs = [f"{u} {v}" for u in range(6) for v in range(u + 1, 6)]
    rng = random.Random(0)
    for _ in range(5):
        # every line is tried in turn; illegal ones are re-prompted, so the human plays some legal line
        lines = []
        for _ in range(15):
            rng.shuffle(pairs)
            lines += pairs
        code, out, _ = run(capsys, "play", "--forbid", "S4", "--score", "P3", "--n", "6", "--human", "max",
                           "--starter", "mini", stdin="\n".join(lines) + "\n", monkeypatch=monkeypatch)
        rec = GameRecord.from_dict(_last_json(out))
        assert code == 0 and rec.final_score <= 5


def test_play_reprompts_and_resigns(capsys, monkeypatch, tmp_path):
    path = tmp_path / "game.json"
    code, out, _ = run(capsys, "play", "--forbid", "S4", "--score", "P3", "--n", "6", "--human", "mini",
                       "--out", str(path), stdin="oops\n9 9\nlegal\nboard\nresign\n", monkeypatch=monkeypatch)
    assert code == 0
    assert out.count("? ") == 2 and "resigned" in out
    rec = GameRecord.from_json(path.read_text())
    assert len(rec.moves) == 1 and rec.final_score is None


def test_play_falls_back_to_policy(capsys, monkeypatch):
    code, out, _ = run(capsys, "play", "--forbid", "S4", "--score", "P6", "--n", "9", "--human", "max",
                       "--max-nodes", "1", "--engine-policy", "mini_p6s4", stdin="0 1\nresign\n",
                       monkeypatch=monkeypatch)
    assert code == 0 and "switches to mini_p6s4" in out
