"""Command-line front end: ``build-table``, ``parse`` and ``oracle-check``.

Exit codes: 0 success/accepted/agree, 1 no parse or disagreement,
2 bad input.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import check
from .beam import BeamConfig, run_two_stage
from .engine import ParseConfig, RandomStrategy, run
from .grammar import GrammarError, build_slr_table, parse_grammar
from .gss import forest_dump
from .lattice import DEFAULT_FLOOR_LOGP, LatticeError, parse_bigram, parse_lattice
from .scoring import best_tree


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_grammar(path):
    try:
        return parse_grammar(_read(path))
    except GrammarError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_inputs(args):
    g = _load_grammar(args.grammar)
    try:
        lattice = parse_lattice(_read(args.lattice))
        bigram = parse_bigram(_read(args.bigram), args.floor_logp, args.strict_bigram)
    except LatticeError as exc:
        raise InputError(str(exc)) from None
    return g, lattice, bigram


def cmd_build_table(args) -> int:
    table = build_slr_table(_load_grammar(args.grammar))
    if args.out:
        Path(args.out).write_text(table.to_json() + "\n", encoding="utf-8")
    print(table.report())
    return 0


def cmd_parse(args) -> int:
    g, lattice, bigram = _load_inputs(args)
    table = build_slr_table(g)
    if math.isfinite(args.beam):
        config = ParseConfig(lam=args.lam, strict_bigram=args.strict_bigram, stop_at_accept=True)
        beam = BeamConfig(args.beam, args.max_recovered)
        result = run_two_stage(g, table, lattice, bigram, config, beam)
    else:
        config = ParseConfig(lam=args.lam, strict_bigram=args.strict_bigram)
        strategy = RandomStrategy(args.seed) if args.seed is not None else None
        result = run(g, table, lattice, bigram, config, strategy)

    print(f"accepted: {'yes' if result.accepted else 'no'}")
    if result.budget_exhausted:
        print("budget exhausted")
    if args.best and result.accepted:
        best = best_tree(result, args.lam, bigram)
        print(best.tree)
        print(f"score: {best.score:.6f}")
    for key in sorted(result.stats):
        print(f"{key}={result.stats[key]}")
    if args.forest:
        Path(args.forest).write_text(forest_dump(result.forest) + "\n", encoding="utf-8")
    return 0 if result.accepted else 1


def _dump_counterexample(name, g, lattice, bigram, verdict) -> None:
    print(f"counterexample ({name}):")
    for p in verdict.problems:
        print(f"  {p}")
    print("--- grammar")
    print(g.to_text(), end="")
    print("--- lattice")
    print(lattice.to_text(), end="")
    print("--- bigram")
    print(bigram.to_text(), end="")


def cmd_oracle_check(args) -> int:
    if args.grammar:
        if not (args.lattice and args.bigram):
            raise InputError("--grammar needs --lattice and --bigram")
        g, lattice, bigram = _load_inputs(args)
        table = build_slr_table(g)
        verdict = check.compare_instance(g, table, lattice, bigram, args.lam)
        if verdict.agree:
            print("agree")
            return 0
        small = check.minimize(g, table, lattice, bigram, args.lam)
        verdict = check.compare_instance(g, table, small, bigram, args.lam)
        _dump_counterexample(Path(args.grammar).name, g, small, bigram, verdict)
        return 1

    report = check.random_trials(args.trials, args.seed or 0, args.max_hyps, args.max_frames, args.lam)
    print(f"trials={report.trials} agree={report.agreed} accepted={report.accepted}")
    if not report.failures:
        print("agree")
        return 0
    name, g, lattice, bigram, _ = report.failures[0]
    table = build_slr_table(g)
    small = check.minimize(g, table, lattice, bigram, args.lam)
    _dump_counterexample(name, g, small, bigram, check.compare_instance(g, table, small, bigram, args.lam))
    return 1


def _add_inputs(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--grammar", required=required)
    p.add_argument("--lattice", required=required)
    p.add_argument("--bigram", required=required)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--strict-bigram", action="store_true")
    p.add_argument("--floor-logp", type=float, default=DEFAULT_FLOOR_LOGP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glrlattice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-table", help="compile a grammar into an SLR(1) table")
    p.add_argument("--grammar", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_table)

    p = sub.add_parser("parse", help="parse a word lattice")
    _add_inputs(p, required=True)
    p.add_argument("--beam", type=float, default=math.inf, help="beam width; inf = exhaustive")
    p.add_argument("--max-recovered", type=float, default=math.inf)
    p.add_argument("--seed", type=int, help="random agenda order (exhaustive mode)")
    p.add_argument("--forest", help="write the packed forest as JSON")
    p.add_argument("--best", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("oracle-check", help="compare the parser with brute force")
    _add_inputs(p, required=False)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-hyps", type=int, default=10)
    p.add_argument("--max-frames", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
