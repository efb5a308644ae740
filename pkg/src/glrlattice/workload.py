"""Synthetic recognizer-sized workload: a large grammar, a trained bigram and lattices."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .beam import BeamConfig, run_two_stage
from .engine import ParseConfig
from .grammar import Grammar, SlrTable, build_slr_table, parse_grammar
from .lattice import BigramModel, Lattice
from .scoring import best_tree
from .synth import (
    bigram_perplexity,
    sample_sentence,
    speech_lattice,
    synthetic_grammar_text,
    train_bigram,
)


@dataclass
class Workload:
    grammar: Grammar
    table: SlrTable
    bigram: BigramModel
    perplexity: float
    items: list[tuple[list[str], Lattice]] = field(default_factory=list)


def build_workload(
    seed: int = 5,
    n_rules: int = 220,
    n_lattices: int = 10,
    hyp_range: tuple[int, int] = (56, 202),
    sentence_len: tuple[int, int] = (5, 12),
    words_per_tag: tuple[int, int] = (10, 25),
) -> Workload:
    rng = random.Random(seed)
    g = parse_grammar(synthetic_grammar_text(rng, n_rules, words_per_tag))
    table = build_slr_table(g)
    sents = [s for s in (sample_sentence(g, rng, sentence_len[1]) for _ in range(3000)) if s]
    train, held_out = sents[:2000], sents[2000:]
    bigram = train_bigram(train, g.lexicon)
    wl = Workload(g, table, bigram, bigram_perplexity(bigram, held_out))
    vocab = sorted(g.lexicon)
    spoken = [s for s in held_out if sentence_len[0] <= len(s) <= sentence_len[1]]
    for s in spoken[:n_lattices]:
        wl.items.append((s, speech_lattice(s, vocab, rng, rng.randint(*hyp_range))))
    return wl


@dataclass
class BenchRow:
    hypotheses: int
    words: int
    accepted: bool
    correct: bool
    seconds: float
    actions: int
    pruned: int
    recovered: int


def run_benchmark(wl: Workload, beam_width: float = 1.0, max_recovered: float = 2000) -> list[BenchRow]:
    """Two-stage beam parse of every lattice; ``correct`` means the spoken words won."""
    rows = []
    for sentence, lattice in wl.items:
        t0 = time.perf_counter()
        result = run_two_stage(
            wl.grammar, wl.table, lattice, wl.bigram,
            ParseConfig(stop_at_accept=True), BeamConfig(beam_width, max_recovered),
        )
        seconds = time.perf_counter() - t0
        best = best_tree(result) if result.accepted else None
        rows.append(BenchRow(
            len(lattice), len(sentence), result.accepted,
            best is not None and list(best.words) == sentence,
            seconds, result.stats["actions.total"],
            result.stats["beam.pruned"], result.stats["beam.recovered"],
        ))
    return rows
