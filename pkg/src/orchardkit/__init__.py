"""orchardkit: orchard phylogenetic networks as trees plus horizontal arcs.

Recognition by cherry picking, HGT-consistent labellings, rSPR/rNNI
rearrangement, canonicalisation of the reticulation stack, explicit rNNI
paths, and exhaustive exploration of small network spaces.
"""

from .network_core import (NetworkError, NodeKindSummary, PhyloNetwork,
                           ValidationReport, are_isomorphic,
                           binary_resolutions, canonical_form, contract_arc,
                           find_isomorphism, is_binary, reticulation_number,
                           summarize, suppress_node, validate)
from .cherry_engine import (CherrySequence, ReduciblePair,
                            find_reducible_pairs, is_orchard,
                            is_orchard_nonbinary_via_resolutions,
                            random_orchard, reconstruct, reduce_pair)
from .enewick_io import ENewickError, parse, write
from .hgt_labelling import (HgtLabelling, base_tree,
                            check_naive_nonbinary_rule, construct,
                            exists_labelling, find_crown,
                            search_consistent_labelling, verify)
from .rearrangement import (InvalidMoveError, MalformedMoveError, MoveError,
                            RnniMove, apply_rnni, apply_rspr, inverse,
                            rnni_neighbors)
from .canonicalizer import (CanonicalizationError, MoveTrace, TopStructure,
                            canonicalize, detect_top, lift_reticulation,
                            lift_triangle, orchard_path, relocate_pendant,
                            reorient_top, tree_path)
from .space_explorer import (SpaceGraph, audit_paths, build_space, diameter,
                             enumerate_networks, is_connected,
                             diameter_upper_bound)

__version__ = "0.1.0"

__all__ = [
    "PhyloNetwork", "NetworkError", "NodeKindSummary", "ValidationReport",
    "validate", "is_binary", "reticulation_number", "summarize",
    "are_isomorphic", "find_isomorphism", "canonical_form", "contract_arc",
    "suppress_node", "binary_resolutions",
    "CherrySequence", "ReduciblePair", "find_reducible_pairs", "reduce_pair",
    "is_orchard", "reconstruct", "is_orchard_nonbinary_via_resolutions",
    "random_orchard",
    "parse", "write", "ENewickError",
    "HgtLabelling", "verify", "construct", "exists_labelling", "base_tree",
    "find_crown", "check_naive_nonbinary_rule", "search_consistent_labelling",
    "RnniMove", "MoveError", "MalformedMoveError", "InvalidMoveError",
    "apply_rspr", "apply_rnni", "inverse", "rnni_neighbors",
    "TopStructure", "MoveTrace", "CanonicalizationError", "detect_top",
    "reorient_top", "lift_triangle", "lift_reticulation", "relocate_pendant",
    "canonicalize", "tree_path", "orchard_path",
    "SpaceGraph", "enumerate_networks", "build_space", "is_connected",
    "diameter", "diameter_upper_bound", "audit_paths",
]
