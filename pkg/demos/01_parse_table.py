"""
Building an SLR(1) table that keeps its conflicts
=================================================

A GLR parser is driven by an ordinary LR table, except that cells with
more than one action are kept instead of rejected.  Each conflict is a
place where the graph-structured stack will fork.
"""

from glrlattice import build_slr_table, parse_grammar
from glrlattice.fixtures import G1_TEXT, G2_TEXT, G3_TEXT

# G1 is deterministic: no cell holds two actions
g1 = parse_grammar(G1_TEXT)
t1 = build_slr_table(g1)
print("G1:", t1.report())

# S -> S S is ambiguous, so the state after S S both shifts and reduces on a
g2 = parse_grammar(G2_TEXT)
t2 = build_slr_table(g2)
print("G2:", t2.report())
for state, sym in t2.conflict_cells():
    print(f"  state {state}, lookahead {sym}:", " ".join(str(a) for a in t2.lookup(state, sym)))

# an empty rule A -> is reduced on FOLLOW(A) = {b} right from the start state
g3 = parse_grammar(G3_TEXT)
t3 = build_slr_table(g3)
print("G3 state 0 on b:", [str(a) for a in t3.lookup(0, "b")])

# the JSON form is what `glrlattice build-table --out` writes
import json

print("G3 state 0 row:", json.loads(t3.to_json())["actions"]["0"])
