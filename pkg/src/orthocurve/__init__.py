"""Curvature tests for orthoscheme complexes of bounded graded posets."""

__version__ = "0.1.0"

from .coxeter import CoxeterSystem, build_coxeter, build_ncw, reflection_length
from .families import (
    boolean_lattice,
    chain_to_boolean,
    noncrossing_partition_lattice,
    partition_lattice,
    subspace_poset,
)
from .metric import diagonal_link, edge_length, link_decomposition, triangle_check
from .poset import (
    Bowtie,
    GradedPoset,
    IntervalHandle,
    build_poset,
    complements_in,
    find_bowtie,
    is_lattice,
    is_modular,
)
from .spindles import (
    CurvatureVerdict,
    Spindle,
    Status,
    cat0_verdict_rank_le4,
    enumerate_global_spindles,
    find_short_spindle,
    is_global_spindle,
    spindle_length,
)

__all__ = [
    "Bowtie",
    "CoxeterSystem",
    "CurvatureVerdict",
    "GradedPoset",
    "IntervalHandle",
    "Spindle",
    "Status",
    "boolean_lattice",
    "build_coxeter",
    "build_ncw",
    "build_poset",
    "cat0_verdict_rank_le4",
    "chain_to_boolean",
    "complements_in",
    "diagonal_link",
    "edge_length",
    "enumerate_global_spindles",
    "find_bowtie",
    "find_short_spindle",
    "is_global_spindle",
    "is_lattice",
    "is_modular",
    "link_decomposition",
    "noncrossing_partition_lattice",
    "partition_lattice",
    "reflection_length",
    "spindle_length",
    "subspace_poset",
    "triangle_check",
]
