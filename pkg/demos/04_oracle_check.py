"""
Checking the parser against brute force
=======================================

The oracle enumerates every lattice path, parses it with a plain
top-down recognizer and scores it as a whole.  Agreement with the GLR
forest and the incremental scorer on random small instances is the main
correctness evidence.
"""

import random

from glrlattice import check, oracle
from glrlattice.fixtures import g2
from glrlattice.grammar import build_slr_table
from glrlattice.synth import random_cfg, random_instance

g = random_cfg()
print("random grammar:", len(g.rules), "rules,", build_slr_table(g).report())

rng = random.Random(3)
lattice, bigram = random_instance(g, rng, max_hyps=8)
print(lattice.to_text())
print("paths:", oracle.count_paths(lattice))
print("grammatical:", len(oracle.grammatical_paths(g, lattice)))
verdict = check.compare_instance(g, build_slr_table(g), lattice, bigram)
print("agree:", verdict.agree, "engine", verdict.engine_score, "oracle", verdict.oracle_score)

report = check.random_trials(200, seed=7)
print(f"{report.agreed}/{report.trials} random instances agree ({report.accepted} parse)")

# Catalan numbers fall out of S -> S S
for n in range(1, 7):
    print(n, len(oracle.recognize(g2(), ["a"] * n)))
