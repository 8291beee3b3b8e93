"""Optimal k-in-out graphs: construction, brute-force verification,
GTSP-to-ATSP conversion without large weights, and cutting-plane
constraint generation."""

from .constraints import (LinearConstraint, LpConstraintSet, check_constraints,
                          emit_constraints, write_lp)
from .construct import (CanonicalPath, Layout, build_inout, canonical_path,
                        crossing_count, layout)
from .core import (DiGraph, GraphError, InOutGraph, ParseError,
                   VertexPartition, bipartition, classify_vertices,
                   read_graph, satisfies_lemma1, write_graph)
from .gtsp import (AtspInstance, ConversionMap, GtspInstance, GtspTour,
                   brute_force_atsp, brute_force_gtsp, convert, map_tour_back,
                   parse_gtsp, random_instance, read_atsp, read_map,
                   write_atsp, write_map, write_tsplib_atsp)
from .verify import (OracleLimitError, SearchResult, VerificationReport,
                     bound_arcs, bound_order, check_single_visit,
                     enumerate_hamiltonian_cycles, find_ham_paths,
                     ham_path_matrix, search_min, verify_inout)

__all__ = [
    "AtspInstance", "CanonicalPath", "ConversionMap", "DiGraph", "GraphError",
    "GtspInstance", "GtspTour", "InOutGraph", "Layout", "LinearConstraint",
    "LpConstraintSet", "OracleLimitError", "ParseError", "SearchResult",
    "VerificationReport", "VertexPartition", "bipartition", "bound_arcs",
    "bound_order", "brute_force_atsp", "brute_force_gtsp", "build_inout",
    "canonical_path", "check_constraints", "check_single_visit",
    "classify_vertices", "convert", "crossing_count",
    "enumerate_hamiltonian_cycles", "emit_constraints", "find_ham_paths",
    "ham_path_matrix", "layout", "map_tour_back", "parse_gtsp",
    "random_instance", "read_atsp", "read_graph", "read_map",
    "satisfies_lemma1", "search_min", "verify_inout", "write_atsp",
    "write_graph", "write_lp", "write_map", "write_tsplib_atsp",
]

__version__ = "0.1.0"
