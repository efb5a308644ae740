"""
Parsing a word lattice
======================

A lattice is a set of word hypotheses (start frame, end frame, word,
acoustic log-probability).  The parser builds one packed forest for every
grammatical path through it at once.
"""

from glrlattice import best_tree, build_slr_table, parse_bigram, parse_grammar, parse_lattice, run
from glrlattice.fixtures import G1_BIGRAM
from glrlattice.gss import node_trees

grammar = parse_grammar("""
S -> NP VP
NP -> det n
NP -> n
VP -> v
VP -> v NP
lex det the
lex n dog
lex n fog
lex n dogs
lex v barks
lex v bark
lex n bark
""")
table = build_slr_table(grammar)

# two competing noun hypotheses, and two readings of the last word
lattice = parse_lattice("""
0 5 dog -50.0
0 5 fog -58.0
5 9 barks -40.0
5 9 bark -41.0
""")
bigram = parse_bigram(G1_BIGRAM)

result = run(grammar, table, lattice, bigram)
print("accepted:", result.accepted)
(root,) = result.root_nodes
for tree in sorted(node_trees(root)):
    print("  ", tree)

# the best derivation maximizes the length-normalized acoustic score plus
# lambda times the per-bigram language model average, over the whole path
for lam in (0.0, 1.0, 5.0):
    print(f"lambda={lam}:", best_tree(result, lam, bigram).format().replace("\n", "  "))

# the order of agenda actions does not matter
from glrlattice import RandomStrategy
from glrlattice.gss import forest_dump

dumps = {forest_dump(run(grammar, table, lattice, bigram, strategy=RandomStrategy(s)).forest) for s in range(20)}
print("distinct forests over 20 random orders:", len(dumps))
print({k: v for k, v in sorted(result.stats.items()) if k.startswith("actions")})
