"""Command-line interface: ``satgame <command> [flags]``.

Exit codes: 0 ok, 1 check failure, 2 usage or input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .abstract import rows_to_csv, rows_to_json, table_p3, table_p4
from .engine import GameRecord, GameSpec, GameState, Player, apply_move, legal_moves, norm, play_out
from .errors import BudgetExceeded, IllegalMove, InvariantViolation, SatgameError, StrategyGap
from .harness import BUDGET_LEVELS, check_ids, fuzz_policy, run_checks
from .patterns import count_copies
from .solver import CACHE_SCHEMA, Solver, default_budget
from .strategies import catalog, get_policy, policy_ids

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

STARTER_HELP = "who moves first: max (player 1, s_1) or mini (player 2, s_2)"
EPILOG = """\
players: index 1 is Max (maximises the score), index 2 is Mini (minimises it);
  --starter max gives s_1, --starter mini gives s_2.
patterns: P<s> path on s vertices, S<l> star on l vertices, K3, C<k>, and
  'cycles' (forbid only) for the family of all cycles.
exit codes: 0 ok, 1 check failure, 2 usage, 3 budget.
SATGAME_MAX_NODES overrides the default node budget."""


class UsageError(SatgameError):
    pass


# -- argument parsing ------------------------------------------------------------------


def _spec_flags(p: argparse.ArgumentParser, n_required: bool = True) -> None:
    p.add_argument("--forbid", required=True, help="forbidden graph: P<s>, S<l>, K3, C<k> or cycles")
    p.add_argument("--score", required=True, help="scored pattern: P<s>, S<l>, K3 or C<k>")
    p.add_argument("--n", type=int, required=n_required, help="number of vertices")
    p.add_argument("--starter", default="max", choices=["max", "mini"], help=STARTER_HELP)


def _budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=None, help="node budget (default: SATGAME_MAX_NODES or 1e8)")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(prog="satgame", description="Scored saturation games on small graphs.",
                                     epilog=EPILOG, formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"satgame {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("solve", help="exact game value by minimax", epilog=EPILOG, formatter_class=fmt)
    _spec_flags(p)
    _budget_flags(p)
    p.add_argument("--cache", help="transposition cache file (loaded if present, then extended)")
    p.add_argument("--no-pv", action="store_true", help="skip the principal variation")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("table", help="S4-free path-score tables from the counter abstraction", epilog=EPILOG,
                       formatter_class=fmt)
    p.add_argument("table", choices=["p3s4", "p4s4"])
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run harness checks", epilog=EPILOG, formatter_class=fmt)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--check", action="append", choices=check_ids(), help="check id (repeatable)")
    g.add_argument("--all", action="store_true", help="every check in the catalog")
    g.add_argument("--list", action="store_true", help="list check ids and exit")
    p.add_argument("--budget-level", choices=BUDGET_LEVELS, default="desk")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", help="also write the JSON report stream here")

    p = sub.add_parser("fuzz", help="random-adversary games against one policy", epilog=EPILOG,
                       formatter_class=fmt)
    p.add_argument("--policy", required=True, choices=policy_ids())
    p.add_argument("--n", type=int, default=20, help="largest n to play")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--games", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--forbid", help="restrict to one forbidden graph")
    p.add_argument("--score", help="restrict to one scored pattern")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("play", help="play against the engine in the terminal", epilog=EPILOG, formatter_class=fmt)
    _spec_flags(p)
    p.add_argument("--human", choices=["max", "mini"], default="max", help="the side you play")
    p.add_argument("--max-nodes", type=int, default=None, help="engine search budget per move")
    p.add_argument("--engine-policy", choices=policy_ids(), help="policy used when the search budget runs out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="save the game record (JSON) here; printed to stdout otherwise")

    p = sub.add_parser("cache", help="inspect or remove transposition cache files")
    p.add_argument("action", choices=["info", "clear"])
    p.add_argument("path")

    p = sub.add_parser("export", help="export a game record (solver line or policy play-out)", epilog=EPILOG,
                       formatter_class=fmt)
    _spec_flags(p)
    p.add_argument("--source", choices=["pv", "policies"], default="pv")
    p.add_argument("--max-policy", default="first_legal", choices=policy_ids())
    p.add_argument("--mini-policy", default="first_legal", choices=policy_ids())
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("policies", help="list the strategy catalog")
    p.add_argument("--format", choices=["text", "json"], default="text")
    return parser


# -- helpers --------------------------------------------------------------------------


def _spec(args) -> GameSpec:
    try:
        return GameSpec.parse(args.forbid, args.score, args.n, args.starter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _threads_env(threads: int):
    if threads > 1:
        os.environ["SATGAME_THREADS"] = str(threads)
    else:
        os.environ.pop("SATGAME_THREADS", None)


# -- commands ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    spec = _spec(args)
    solver = Solver(spec, max_nodes=args.max_nodes)
    loaded = solver.load_cache(args.cache) if args.cache and os.path.exists(args.cache) else 0
    _threads_env(args.threads)
    try:
        result = solver.solve(with_pv=not args.no_pv)
    finally:
        _threads_env(1)
        if args.cache:
            solver.save_cache(args.cache)
    payload = {"spec": spec.to_dict(), **result.to_dict()}
    if args.cache:
        payload["cache_loaded"] = loaded
    if args.format == "json":
        _emit(_dumps(payload), args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["forbid", "score", "n", "starter", "value", "nodes_expanded", "cache_hits"])
        d = spec.to_dict()
        w.writerow([d["forbid"], d["score"], d["n"], d["starter"], result.value, result.nodes_expanded,
                    result.cache_hits])
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    rows = table_p3(args.max_n) if args.table == "p3s4" else table_p4(args.max_n)
    _emit(rows_to_json(rows) if args.format == "json" else rows_to_csv(rows), args.out)
    return EXIT_OK if all(r.match for r in rows) else EXIT_FAIL


def _report_exit(reports) -> int:
    if any(r.verdict == "fail" for r in reports):
        return EXIT_FAIL
    if any(r.verdict == "budget" for r in reports):
        return EXIT_BUDGET
    return EXIT_OK


def _write_reports(reports, fmt: str, out: str | None) -> None:
    stream = "\n".join(r.to_json() for r in reports)
    if fmt == "json":
        sys.stdout.write(stream + "\n")
    else:
        for r in reports:
            sys.stdout.write(r.summary() + "\n")
            for f in r.findings:
                sys.stdout.write(f"  finding: {f}\n")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(stream + "\n")


def cmd_verify(args) -> int:
    if args.list:
        for cid in check_ids():
            sys.stdout.write(cid + "\n")
        return EXIT_OK
    ids = check_ids() if args.all else list(dict.fromkeys(args.check))
    reports = run_checks(ids, args.budget_level, threads=args.threads)
    _write_reports(reports, args.format, args.out)
    return _report_exit(reports)


def cmd_fuzz(args) -> int:
    if args.n < args.n_min or args.games < 0:
        raise UsageError("need --n-min <= --n and --games >= 0")
    rep = fuzz_policy(args.policy, args.n_min, args.n, args.games, args.seed, args.forbid, args.score)
    _write_reports([rep], args.format, args.out)
    return _report_exit([rep])


def _engine_fallback(args, spec: GameSpec, side: Player):
    if args.engine_policy:
        return get_policy(args.engine_policy)
    for pid in policy_ids():
        p = get_policy(pid)
        if pid not in ("first_legal", "uniform_random") and p.applicable(spec, side):
            return p
    return get_policy("first_legal")


def _parse_move(text: str, n: int) -> tuple[int, int]:
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise ValueError("type two vertices, e.g. '0 1'")
    u, v = int(parts[0]), int(parts[1])
    if not (0 <= u < n and 0 <= v < n) or u == v:
        raise ValueError(f"vertices must be distinct and in 0..{n - 1}")
    return norm(u, v)


def cmd_play(args) -> int:
    spec = _spec(args)
    human = Player.parse(args.human)
    engine = human.other
    solver = Solver(spec, max_nodes=default_budget() if args.max_nodes is None else args.max_nodes)
    fallback = None
    memo = None
    state = GameState.initial(spec)
    record = GameRecord(spec)
    say = sys.stdout.write
    say(f"{spec.fingerprint()}: you are {human.value} (player {human.index}); vertices 0..{spec.n - 1}\n")
    say("enter a move as 'u v'; commands: legal, board, resign\n")
    while True:
        legal = legal_moves(spec, state)
        if not legal:
            break
        if state.to_move is human:
            say(f"[{len(record.moves)}] {human.value}> ")
            sys.stdout.flush()
            line = sys.stdin.readline()
            if not line:
                line = "resign"
            cmd = line.strip().lower()
            if cmd == "resign":
                say("resigned\n")
                _save_record(record, args.out)
                return EXIT_OK
            if cmd == "legal":
                say(" ".join(f"{u}-{v}" for u, v in legal) + "\n")
                continue
            if cmd == "board":
                say(" ".join(f"{u}-{v}" for u, v in state.graph.edges()) or "(no edges)")
                say("\n")
                continue
            try:
                move = _parse_move(cmd, spec.n)
            except ValueError as exc:
                say(f"? {exc}\n")
                continue
            if move not in legal:
                say(f"? {move[0]} {move[1]} is not legal here (type 'legal')\n")
                continue
        else:
            move = None
            if fallback is None:
                try:
                    move = solver.principal_variation(state)[0]
                except BudgetExceeded:
                    fallback = _engine_fallback(args, spec, engine)
                    memo = _replay_memo(fallback, spec, engine, record, args.seed)
                    say(f"(search budget exhausted; engine switches to {fallback.policy_id})\n")
            if move is None:
                move = norm(*fallback.choose(spec, state.graph, memo, legal))
            say(f"engine plays {move[0]} {move[1]}\n")
        if fallback is not None:
            memo = fallback.observe(spec, state.graph, move, state.to_move, memo)
        state = apply_move(spec, state, move)
        record.moves.append(move)
    record.final_graph = state.graph
    record.final_score = count_copies(state.graph, spec.score)
    say(f"game over: {len(record.moves)} edges, score {record.final_score}\n")
    _save_record(record, args.out)
    return EXIT_OK


def _replay_memo(policy, spec: GameSpec, side: Player, record: GameRecord, seed: int):
    memo = policy.initial(spec, side, seed)
    state = GameState.initial(spec)
    for m in record.moves:
        memo = policy.observe(spec, state.graph, m, state.to_move, memo)
        state = apply_move(spec, state, m)
    return memo


def _save_record(record: GameRecord, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(record.to_json() + "\n")
        sys.stdout.write(f"record saved to {out}\n")
    else:
        sys.stdout.write(record.to_json() + "\n")


def cmd_cache(args) -> int:
    if not os.path.exists(args.path):
        raise UsageError(f"{args.path}: no such file")
    with open(args.path, encoding="ascii", errors="replace") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        entries = sum(1 for _ in fh)
    if len(header) != 2 or header[0] != CACHE_SCHEMA:
        raise UsageError(f"{args.path}: not a {CACHE_SCHEMA} file")
    if args.action == "info":
        sys.stdout.write(_dumps({"path": args.path, "schema": header[0], "spec": header[1], "entries": entries}) + "\n")
    else:
        os.remove(args.path)
        sys.stdout.write(f"removed {args.path} ({entries} entries)\n")
    return EXIT_OK


def cmd_export(args) -> int:
    spec = _spec(args)
    if args.source == "pv":
        solver = Solver(spec, max_nodes=args.max_nodes)
        moves = solver.principal_variation()
        record = GameRecord(spec, moves)
        record.final_graph = record.replay()
        record.final_score = count_copies(record.final_graph, spec.score)
    else:
        pmax, pmini = get_policy(args.max_policy), get_policy(args.mini_policy)
        pmax.check_applicable(spec, Player.MAX)
        pmini.check_applicable(spec, Player.MINI)
        record = play_out(spec, pmax, pmini, seed=args.seed)
    if args.format == "json":
        _emit(record.to_json(), args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ply", "player", "u", "v"])
        for i, (mover, (u, v)) in enumerate(zip(record.movers(), record.moves), start=1):
            w.writerow([i, mover.value, u, v])
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_policies(args) -> int:
    rows = catalog()
    if args.format == "json":
        sys.stdout.write(_dumps(rows) + "\n")
    else:
        for r in rows:
            sys.stdout.write(f"{r['policy']:<24} {r['applies_to']}\n    {r['summary']}\n")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "table": cmd_table,
    "verify": cmd_verify,
    "fuzz": cmd_fuzz,
    "play": cmd_play,
    "cache": cmd_cache,
    "export": cmd_export,
    "policies": cmd_policies,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        sys.stderr.write(f"satgame: {exc} (raise --max-nodes or SATGAME_MAX_NODES)\n")
        return EXIT_BUDGET
    except (StrategyGap, InvariantViolation, IllegalMove) as exc:
        sys.stderr.write(f"satgame: {exc}\n")
        return EXIT_FAIL
    except SatgameError as exc:
        sys.stderr.write(f"satgame: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
