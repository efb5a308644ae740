"""
Beam search with best-first recovery
====================================

Shift actions are scored by the best complete left context they extend.
Per frame only those within the beam of the frame's best run; the rest are
parked.  If the beam finds no parse, parked shifts are resumed best first.
"""

import math

from glrlattice import BeamConfig, ParseConfig, build_slr_table, parse_grammar, parse_lattice, run, run_two_stage
from glrlattice.lattice import BEGIN_MARKER, BigramModel
from glrlattice.scoring import Scorer, best_tree

# dog sounds better, but only fog leads to a sentence
grammar = parse_grammar("""
S -> NP VP
S -> d d
NP -> n
VP -> v
lex n fog
lex d dog
lex v barks
""")
table = build_slr_table(grammar)
lattice = parse_lattice("0 5 dog -50.0\n0 5 fog -60.0\n5 9 barks -40.0\n")
bigram = BigramModel({
    (BEGIN_MARKER, "dog"): math.log(0.5),
    (BEGIN_MARKER, "fog"): math.log(0.5),
    ("fog", "barks"): math.log(0.25),
})

for width in (0.0, 1.0, 5.0, math.inf):
    res = run_two_stage(grammar, table, lattice, bigram, ParseConfig(stop_at_accept=True), BeamConfig(width))
    s = res.stats
    print(
        f"beam {width:>4}: accepted={res.accepted} stage={s['beam.stage']} "
        f"pruned={s['beam.pruned']} recovered={s['beam.recovered']} actions={s['actions.total']}"
    )

# the outside score of a link is the best full-path score of anything
# reaching it, so along a single path it climbs to the sentence score
res = run(grammar, table, lattice, bigram)
scorer = Scorer(bigram, 1.0)
for link in sorted(res.state.links(), key=lambda l: (l.node.end, l.node.label)):
    print(f"  link {link.node.label:<8} outside {scorer.outside_value(link):9.4f}")
print("best:", best_tree(res).format().replace("\n", "  "))
