"""Command line interface: ``memred solve|reduce|compare|gen``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arena import GameError, dump_game, game_to_dot, load_game
from .automaton import automaton_to_dot, automaton_to_game
from .generators import gen_random, gen_rr, gen_streett
from .pipeline import PipelineOptions, controllers, reduce_game, run_pipeline
from .reductions import simulate
from .solvers import solve
from .strategy import (NotWinning, extract_strategy, mealy_to_dot, minimize_mealy,
                       verify_strategy)

EXIT_OK, EXIT_INVALID, EXIT_UNVERIFIED = 0, 1, 2


def _options(args) -> PipelineOptions:
    return PipelineOptions(full_memory=args.full_memory,
                           normalize=not getattr(args, "no_normalize", False),
                           initial=args.initial)


def _write(directory, name, text) -> None:
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text, encoding="utf-8")


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [["-" if c is None else str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def cmd_solve(args) -> int:
    game = load_game(args.file)
    sim = simulate(game, args.full_memory)
    result = solve(sim.product)
    won = sorted(sim.project(result.winning0))
    report = {"name": game.name, "vertices": len(game.arena), "winning0": won,
              "initial": args.initial, "winning": args.initial in won,
              "controller_states": None, "verified": None}
    controller = None
    if args.initial in won:
        controller = minimize_mealy(extract_strategy(sim, result, args.initial))
        report["controller_states"] = len(controller)
        report["verified"] = verify_strategy(game, controller, args.initial).ok
    if args.emit_dot:
        _write(args.emit_dot, f"{game.name}.dot", game_to_dot(game))
        if controller is not None:
            _write(args.emit_dot, f"{game.name}.controller.dot", mealy_to_dot(controller, game))
    if args.json_report:
        print(json.dumps(report, indent=1))
    else:
        print(f"{game.name}: Player 0 wins from {won}")
        if controller is not None:
            verdict = "verified" if report["verified"] else "VERIFICATION FAILED"
            print(f"controller from {args.initial}: {len(controller)} state(s), {verdict}")
        else:
            print(f"Player 1 wins from {args.initial}")
    return EXIT_UNVERIFIED if report["verified"] is False else EXIT_OK


def cmd_reduce(args) -> int:
    game = load_game(args.file)
    red = reduce_game(game, _options(args))
    reduced = red.reduced.product
    report = {"name": game.name, "expanded_memory": len(red.sim.memories),
              "reduced_memory": red.n_classes,
              "expanded_states": len(red.sim.product.arena),
              "reduced_states": len(reduced.arena),
              "sim_game_vertices": red.sim_game_vertices}
    if args.output:
        dump_game(reduced, args.output, red.reduced.memory_of)
    if args.emit_dot:
        _write(args.emit_dot, f"{game.name}.automaton.dot", automaton_to_dot(red.working))
        _write(args.emit_dot, f"{game.name}.quotient.dot", automaton_to_dot(red.quotient))
        _write(args.emit_dot, f"{game.name}.reduced.dot",
               game_to_dot(automaton_to_game(red.quotient, reduced.name)))
    if args.json_report:
        print(json.dumps(report, indent=1))
    else:
        print(_table([[report[k] for k in report]], list(report)))
    return EXIT_OK


COMPARE_COLUMNS = [("name", "game"), ("vertices", "|V|"), ("edges", "|E|"), ("pairs", "pairs"),
                   ("expanded_memory", "|S|"), ("reduced_memory", "|S/~|"),
                   ("baseline_minimized", "base ctrl"), ("reduced_minimized", "red ctrl"),
                   ("language_preserved", "L(A)=L(A/~)"), ("baseline_verified", "base ok"),
                   ("reduced_verified", "red ok"), ("bound_status", "2^k bound")]


def cmd_compare(args) -> int:
    reports = []
    for f in args.files:
        game = load_game(f)
        report = run_pipeline(game, _options(args))
        reports.append(report)
        if args.emit_dot and report.winning:
            base, small = controllers(game, _options(args))
            _write(args.emit_dot, f"{game.name}.baseline.dot", mealy_to_dot(base, game))
            _write(args.emit_dot, f"{game.name}.reduced.dot", mealy_to_dot(small, game))
    if args.figures:
        from .plotting import write_figures

        write_figures(reports, args.figures)
    if args.json_report:
        print(json.dumps({"reports": [r.to_dict() for r in reports]}, indent=1))
    else:
        rows = [[getattr(r, key) for key, _ in COMPARE_COLUMNS] for r in reports]
        print(_table(rows, [h for _, h in COMPARE_COLUMNS]))
        for r in reports:
            stages = ", ".join(f"{s} {t:.1f}" for s, t in r.times_ms.items())
            print(f"{r.name} [ms]: {stages}")
            if r.bound_status == "bound check skipped":
                print(f"{r.name}: bound check skipped (strategy enters odd colors)")
            if not r.winning:
                print(f"{r.name}: Player 1 wins from {r.initial}; no controller")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_UNVERIFIED


def cmd_gen(args) -> int:
    if args.family == "rr":
        game = gen_rr(args.k)
    elif args.family == "streett":
        game = gen_streett(args.k)
    else:
        game = gen_random(args.kind, args.n, args.pairs, args.seed)
    text = dump_game(game, args.output)
    if not args.output:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memred", description="Solve request-response and Streett games and reduce "
        "the memory of their winning strategies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, normalize=True):
        p.add_argument("--full-memory", action="store_true",
                       help="materialize every memory content, not only reachable ones")
        if normalize:
            p.add_argument("--no-normalize", action="store_true",
                           help="skip SCC color normalization (Streett)")
        p.add_argument("--initial", type=int, default=0, help="initial vertex (default 0)")
        p.add_argument("--emit-dot", metavar="DIR", help="write DOT files to DIR")
        p.add_argument("--json-report", action="store_true", help="print a JSON report")

    p = sub.add_parser("solve", help="solve a game and build a controller")
    p.add_argument("file")
    common(p, normalize=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="reduce the memory of a game")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the reduced game (JSON) here")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("compare", help="baseline vs. reduced pipeline")
    p.add_argument("files", nargs="+")
    p.add_argument("--figures", metavar="DIR", help="write PNG charts and a CSV to DIR")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="generate example games")
    gsub = p.add_subparsers(dest="family", required=True)
    for fam in ("rr", "streett"):
        q = gsub.add_parser(fam)
        q.add_argument("k", type=int)
        q.add_argument("-o", "--output")
    q = gsub.add_parser("random")
    q.add_argument("kind", choices=["rr", "streett", "buchi", "parity"])
    q.add_argument("n", type=int)
    q.add_argument("--pairs", type=int, default=1)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GameError, NotWinning, json.JSONDecodeError, OSError, KeyError, TypeError,
            ValueError) as exc:
        print(f"memred: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
