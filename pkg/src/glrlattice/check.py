"""Engine-versus-oracle agreement on single instances and random batches."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from . import oracle, scoring
from .beam import BeamConfig, run_two_stage
from .engine import ParseConfig, run
from .fixtures import g1, g2, g3
from .grammar import Grammar, SlrTable, build_slr_table
from .gss import node_yields
from .lattice import BigramModel, Lattice, make_lattice
from .synth import random_cfg, random_instance

SCORE_TOL = 1e-9


@dataclass
class Verdict:
    agree: bool
    problems: list[str] = field(default_factory=list)
    accepted: bool = False
    engine_score: float | None = None
    oracle_score: float | None = None


def compare_instance(
    g: Grammar,
    table: SlrTable,
    lattice: Lattice,
    bigram: BigramModel,
    lam: float = 1.0,
    check_recovery: bool = True,
) -> Verdict:
    """Exhaustive parse, best tree and (optionally) beam-0 recovery vs brute force."""
    problems = []
    result = run(g, table, lattice, bigram, ParseConfig(lam=lam))
    expected = oracle.grammatical_paths(g, lattice)
    got = set()
    for root in result.root_nodes:
        got |= node_yields(root)
    if got != set(expected):
        problems.append(
            f"paths differ: engine-only={len(got - set(expected))} "
            f"oracle-only={len(set(expected) - got)}"
        )

    best = scoring.best_tree(result, lam, bigram)
    ref = oracle.best_path(g, lattice, bigram, lam)
    engine_score = best.score if best else None
    oracle_score = ref[2] if ref else None
    if (best is None) != (ref is None):
        problems.append(f"acceptance differs: engine={best is not None} oracle={ref is not None}")
    elif best is not None and not abs(best.score - ref[2]) <= SCORE_TOL:
        problems.append(f"best score differs: engine={best.score!r} oracle={ref[2]!r}")

    if check_recovery:
        rec = run_two_stage(
            g, table, lattice, bigram,
            ParseConfig(lam=lam, stop_at_accept=True),
            BeamConfig(beam_width=0.0, max_recovered=math.inf),
        )
        if rec.accepted != bool(expected):
            problems.append(f"two-stage acceptance differs: beam={rec.accepted}")
    return Verdict(not problems, problems, result.accepted, engine_score, oracle_score)


def minimize(g: Grammar, table: SlrTable, lattice: Lattice, bigram: BigramModel, lam: float) -> Lattice:
    """Greedily drop hypotheses while the disagreement persists."""
    hyps = list(lattice)
    changed = True
    while changed:
        changed = False
        for i in range(len(hyps)):
            trial = make_lattice(hyps[:i] + hyps[i + 1 :])
            if not compare_instance(g, table, trial, bigram, lam).agree:
                hyps = list(trial)
                changed = True
                break
    return make_lattice(hyps)


def grammar_pool() -> list[tuple[str, Grammar]]:
    return [("G1", g1()), ("G2", g2()), ("G3", g3()), ("R20", random_cfg())]


@dataclass
class BatchReport:
    trials: int = 0
    agreed: int = 0
    accepted: int = 0
    failures: list[tuple[str, Grammar, Lattice, BigramModel, Verdict]] = field(default_factory=list)


def random_trials(
    trials: int,
    seed: int,
    max_hyps: int = 10,
    max_frames: int = 8,
    lam: float = 1.0,
    pool=None,
    check_recovery: bool = True,
) -> BatchReport:
    rng = random.Random(seed)
    pool = pool or grammar_pool()
    tables = [build_slr_table(g) for _, g in pool]
    report = BatchReport()
    for _ in range(trials):
        k = rng.randrange(len(pool))
        name, g = pool[k]
        lattice, bigram = random_instance(g, rng, max_hyps=max_hyps, max_frames=max_frames)
        verdict = compare_instance(g, tables[k], lattice, bigram, lam, check_recovery)
        report.trials += 1
        report.accepted += verdict.accepted
        if verdict.agree:
            report.agreed += 1
        else:
            report.failures.append((name, g, lattice, bigram, verdict))
    return report
