"""Small grammars, lattices and bigram models used by tests, demos and the CLI."""

from __future__ import annotations

import math

from .grammar import parse_grammar
from .lattice import parse_bigram, parse_lattice

G1_TEXT = """\
S -> NP VP
NP -> n
VP -> v
lex n dog
lex v barks
"""

G2_TEXT = """\
S -> S S
S -> a
lex a a
"""

G3_TEXT = """\
S -> A b
A ->
A -> a
lex a a
lex b b
"""

# dog over [0,5], barks over [5,9]
G1_LATTICE = """\
0 5 dog -50.0
5 9 barks -40.0
"""

G1_BIGRAM = f"""\
<s> dog {math.log(0.5)!r}
dog barks {math.log(0.25)!r}
"""

# G1 best score: lambda * (log .5 + log .25) / 2 + (-90 / 9)
G1_BEST_SCORE = (math.log(0.5) + math.log(0.25)) / 2 - 10.0


def chain_lattice_text(word: str, n: int, frames: int = 1, logp: float = -1.0) -> str:
    """``n`` abutting copies of ``word``, each ``frames`` long."""
    return "".join(
        f"{i * frames} {(i + 1) * frames} {word} {logp!r}\n" for i in range(n)
    )


G3_LATTICES = {
    "b": "0 2 b -4.0\n",
    "a b": "0 2 a -3.0\n2 4 b -5.0\n",
    "a|b b": "0 2 a -3.0\n0 2 b -6.0\n2 4 b -5.0\n",
}


def g1():
    return parse_grammar(G1_TEXT)


def g2():
    return parse_grammar(G2_TEXT)


def g3():
    return parse_grammar(G3_TEXT)


def g1_lattice():
    return parse_lattice(G1_LATTICE)


def g1_bigram():
    return parse_bigram(G1_BIGRAM)
