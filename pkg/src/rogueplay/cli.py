"""Command line: run batches, list and check scenarios."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .backends import Cassette, CassetteBackend, HttpBackend, ScriptedBackend
from .harness import AGENTS, FULL_GAME, report, run_batch
from .scenarios import ScenarioError, parse, to_text
from .scenarios.builtin import ORDER, load_scenario, scenario_source


def _script_backend(path: str) -> ScriptedBackend:
    """One JSON response per line, served in order; finish_task afterwards."""
    lines = [line for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    return ScriptedBackend.sequence(lines)


def backend_factory(spec: str | None, agent: str):
    if agent == "handcrafted":
        return None
    if spec is None:
        if agent == "scripted":
            return None
        spec = "http"
    if spec == "http":
        HttpBackend.from_env()  # fail fast on misconfiguration
        return lambda target, seed: HttpBackend.from_env()
    kind, _, path = spec.partition(":")
    if kind == "script" and path:
        return lambda target, seed: _script_backend(path)
    if kind == "replay" and path:
        p = Path(path)

        def replay(target, seed):
            file = p
            if p.is_dir():
                found = sorted(p.glob(f"*-{target}-{seed}.cassette.jsonl"))
                if not found:
                    raise SystemExit(f"no cassette for {target} seed {seed} in {p}")
                file = found[0]
            return CassetteBackend(Cassette.load(file), "replay")

        return replay
    raise SystemExit(f"unknown backend {spec!r}; use http, script:FILE or replay:FILE")


def _cmd_run(args) -> int:
    target = FULL_GAME if args.full_game else args.scenario
    if target is None:
        raise SystemExit("give --scenario NAME or --full-game")
    factory = backend_factory(args.backend, args.agent)
    rep = run_batch(
        args.agent,
        target,
        args.runs,
        args.seed,
        backend_factory=factory,
        out=args.out,
        censor_task=args.censor,
    )
    print(report(rep.summaries))
    return 0


def _cmd_scenarios(args) -> int:
    for name in ORDER:
        spec = load_scenario(name)
        print(f"{name:16} time={spec.time_limit:<4} {spec.task}")
    return 0


def _cmd_show(args) -> int:
    print(scenario_source(args.name) if args.raw else to_text(load_scenario(args.name)), end="")
    return 0


def _cmd_check(args) -> int:
    status = 0
    for path in args.files:
        try:
            spec = parse(Path(path).read_text(encoding="utf-8"))
        except ScenarioError as exc:
            print(f"{path}:{exc}", file=sys.stderr)
            status = 1
        else:
            print(f"{path}: ok ({spec.name})")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rogueplay", description="Run LLM and handcrafted agents on a small roguelike.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a batch of seeded games")
    run.add_argument("--agent", choices=AGENTS, required=True)
    where = run.add_mutually_exclusive_group()
    where.add_argument("--scenario", choices=ORDER)
    where.add_argument("--full-game", action="store_true")
    run.add_argument("--runs", type=int, default=5)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--backend", help="http | script:FILE | replay:FILE_OR_DIR")
    run.add_argument("--out", help="directory for per-run logs, cassettes and the report")
    run.add_argument("--censor", action="store_true", help="replace the game's name in task texts")
    run.set_defaults(func=_cmd_run)

    sc = sub.add_parser("scenarios", help="list the builtin scenarios")
    sc.set_defaults(func=_cmd_scenarios)

    show = sub.add_parser("show", help="print a builtin scenario")
    show.add_argument("name", choices=ORDER)
    show.add_argument("--raw", action="store_true", help="the shipped file instead of the canonical form")
    show.set_defaults(func=_cmd_show)

    check = sub.add_parser("check", help="parse scenario files and report errors with line:column")
    check.add_argument("files", nargs="+")
    check.set_defaults(func=_cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
