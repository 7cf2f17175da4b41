"""Command line entry point.

Exit codes: 0 bad configurations unreachable, 1 reachable, 2 budget
exhausted, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .engine import Direction, Refinement, Verdict, replays, verify
from .modelfile import ModelError, resolve_model
from .oracle import OracleLimit, enumerate_denotation, explicit_search
from .system import ParameterizedSystem
from .words import is_well_formed, parse_word, strengthen

EXIT_UNREACHABLE = 0
EXIT_REACHABLE = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolution(system: ParameterizedSystem, items: list[str]) -> tuple[int, ...]:
    rho = [0] * system.n
    for item in items:
        name, sep, value = item.rpartition(":")
        if not sep or name not in system.states or not value.isdigit():
            raise ModelError(f"bad resolution entry {item!r} (expected STATE:K)")
        rho[system.index(name)] = int(value)
    return tuple(rho)


def _record(system: ParameterizedSystem, r: Refinement) -> dict:
    out = {
        "refinement": r.index,
        "outcome": r.outcome,
        "resolution": {q: k for q, k in zip(system.states, r.resolution) if k},
        "seconds": round(r.stats.seconds, 3),
        "steps": r.stats.steps,
        "words": r.stats.words,
    }
    if r.trace is not None:
        out["trace"] = {
            "words": [system.render(e) for e in r.trace.words],
            "transitions": r.trace.transitions,
        }
    return out


def report(system: ParameterizedSystem, direction: Direction, verdict: Verdict) -> dict:
    out = {
        "model": system.name,
        "direction": direction.value,
        "verdict": verdict.status,
        "refinements": [_record(system, r) for r in verdict.refinements],
        "seconds": round(verdict.seconds, 3),
        "resolution": {q: k for q, k in zip(system.states, verdict.resolution) if k},
    }
    if verdict.run is not None:
        out["witness"] = [
            {"via": via, "configuration": system.render_config(c)} for c, via in verdict.run
        ]
        out["witness_replays"] = replays(system, verdict.run)
    return out


def cmd_verify(args) -> int:
    system = resolve_model(args.model)
    direction = Direction(args.direction)
    rho = _resolution(system, args.resolution)

    def progress(r: Refinement) -> None:
        if not args.quiet:
            print(
                f"refinement {r.index}: {r.outcome} "
                f"({r.stats.steps} steps, {r.stats.words} words, {r.stats.seconds:.2f}s)",
                file=sys.stderr,
            )
            if args.trace and r.trace is not None:
                print(r.trace.render(system), file=sys.stderr)

    verdict = verify(
        system,
        direction,
        rho,
        budget=args.budget,
        total_budget=args.total_budget,
        max_refinements=args.max_refinements,
        on_refinement=progress,
    )
    data = report(system, direction, verdict)
    if args.report:
        Path(args.report).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    print(f"{system.name}: {verdict.status} after {len(verdict.refinements)} refinement(s)")
    if verdict.run is not None:
        for c, via in verdict.run:
            print(f"  {via or 'init':>6}  {system.render_config(c)}")
    return {
        "unreachable": EXIT_UNREACHABLE,
        "reachable": EXIT_REACHABLE,
    }.get(verdict.status, EXIT_BUDGET)


def cmd_oracle(args) -> int:
    system = resolve_model(args.model)
    hit = False
    sizes = [args.n] if args.n is not None else range(args.min, args.max + 1)
    for size in sizes:
        reached, run = explicit_search(system, size)
        status = "bad reachable" if run else "safe"
        print(f"n={size}: {len(reached)} configurations, {status}")
        if run:
            hit = True
            for c, via in run:
                print(f"  {via or 'init':>6}  {system.render_config(c)}")
    return EXIT_REACHABLE if hit else EXIT_UNREACHABLE


def cmd_denote(args) -> int:
    system = resolve_model(args.model)
    phi = parse_word(args.word, system.states)
    if not is_well_formed(phi, system.n):
        raise ModelError("counted word is not well formed")
    phi = strengthen(phi)
    print(system.render(phi))
    for c in sorted(enumerate_denotation(phi, args.length, system.n), key=lambda c: (len(c), c)):
        print("  " + system.render_config(c))
    return EXIT_UNREACHABLE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cwcheck", description="Counted-word reachability checker.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check that no bad configuration is reachable")
    v.add_argument("model", help="model file or bundled model name")
    v.add_argument("--direction", choices=[d.value for d in Direction], default="backward")
    v.add_argument("--budget", type=float, default=1200.0, help="seconds per refinement")
    v.add_argument("--total-budget", type=float, default=None, help="seconds overall")
    v.add_argument("--max-refinements", type=int, default=None)
    v.add_argument(
        "--resolution", action="append", default=[], metavar="STATE:K",
        help="initial threshold for a state (repeatable)",
    )
    v.add_argument("--trace", action="store_true", help="print spurious traces")
    v.add_argument("--report", help="write a JSON run report here")
    v.add_argument("-q", "--quiet", action="store_true")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="explicit-state search for fixed sizes")
    o.add_argument("model")
    o.add_argument("--n", type=int, default=None, help="single system size")
    o.add_argument("--min", type=int, default=2)
    o.add_argument("--max", type=int, default=4)
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("denote", help="list the configurations of a counted word")
    d.add_argument("model")
    d.add_argument("word", help='e.g. "(true | q0 | q1=0)"')
    d.add_argument("--length", type=int, default=3)
    d.set_defaults(func=cmd_denote)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, OracleLimit, ValueError, OSError) as exc:
        print(f"cwcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
