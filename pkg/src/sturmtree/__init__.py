"""Colorings of regular trees with minimal unbounded ball complexity.

The package analyzes and synthesizes two-colorings of d-regular trees whose
radius-n ball census grows as slowly as an aperiodic coloring can, namely
with exactly n + 2 classes per level.  Such colorings admit a quotient
description by a finite-or-ray edge-indexed graph, an induction algorithm
that reads a continued-fraction-like index sequence off the coloring, and an
inverse synthesis that rebuilds the quotient from any admissible sequence.
A companion module provides the classical one-dimensional analogue on binary
words.
"""

from .balls import (
    Analysis,
    ChainLevel,
    LevelTable,
    classify_balls,
    complexity_profile,
    level_report,
    special_chain,
    type_set,
)
from .ballgraphs import BallGraph, build_Gn, build_indexed, detect_cycle, index_of
from .concat import ConcatResult, concat_i, concat_ij
from .cover import ColoredBall, brute_force_cover, canonical_of_cover, restrict_ball, unfold_ball
from .eig import (
    Edge,
    Graph,
    Vertex,
    find_isomorphism,
    graphs_isomorphic,
    make_graph,
    parse_eig,
    serialize_eig,
    to_dot,
    validate_graph,
)
from .induction import (
    BoundednessReport,
    InductionTrace,
    RoundTripReport,
    beta_letters,
    classify_boundedness,
    extract_trace,
    ray_overlap_equal,
    roundtrip_graph,
    roundtrip_sequence,
    verify_step_decomposition,
)
from .synthesis import (
    AdmissibleSequence,
    Frame,
    PrefixResult,
    build_prefix,
    random_admissible,
    run_synthesis,
    strip_truncation,
    validate_alpha_i,
    validate_beta,
    validate_sequence,
)
from .words import (
    Quadratic,
    RauzyGraph,
    cf_induction,
    cf_word,
    mechanical_word,
    word_complexity,
    word_rauzy_graph,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
