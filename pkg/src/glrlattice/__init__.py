"""GLR parsing of speech-recognizer word lattices with beam search."""

from .beam import BeamConfig, BeamStrategy, PrunedAgenda, beam_strategy, run_two_stage
from .engine import (
    Engine,
    FifoStrategy,
    LifoStrategy,
    ParseConfig,
    ParseResult,
    RandomStrategy,
    Strategy,
    run,
)
from .grammar import (
    Grammar,
    GrammarError,
    Rule,
    SlrTable,
    Symbol,
    build_slr_table,
    categories_of_key,
    parse_grammar,
)
from .gss import ForestError, GssState, Link, Node, Vertex, forest_dump, validate_forest
from .lattice import (
    BEGIN_MARKER,
    BigramModel,
    Lattice,
    LatticeError,
    UnknownBigramError,
    WordHypothesis,
    bigram_logprob,
    make_lattice,
    parse_bigram,
    parse_lattice,
)
from .scoring import (
    BoundaryEntry,
    ScoreComponents,
    Scorer,
    ScoringConfig,
    best_tree,
    combine_children,
    inside_of,
    normalize_components,
    outside_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
