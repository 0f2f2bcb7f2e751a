"""Sparsification-preserving reductions to List H-Colouring.

Exact solvers, hardness-witness search, verified gadgets and the
Clique -> Annotated List P4-Colouring -> List H-Colouring pipeline.
"""

from .errors import (BoundExceeded, ConstructionError, HomredError, InvalidArgument,
                     InvariantViolation, NotApplicable, NotFound)
from .gadgets import (DistinguishedInstance, GadgetKit, build_blocking_gadget, build_gadget_kit,
                      build_not_gadget, synthesize_unequal_gadget, verify_gadget,
                      walk_chain_instance)
from .graph import Graph, builtin
from .reductions import (CompositionLayout, SizeReport, annotated_to_list_hom, cross_compose,
                         lift_consistent_to_H, reduce_for_target, size_report)
from .solver import (AnnotatedP4Instance, CliqueInstance, ListHomInstance, enumerate_all_hom,
                     has_k_clique, solve_annotated_p4, solve_list_hom)
from .structure import (associated_bipartite, classify_hardness, derive_special_triples,
                        find_asteroid, find_avoiding_walks, find_extended_p4,
                        find_long_induced_cycle, is_consistent_instance)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedP4Instance",
    "BoundExceeded",
    "CliqueInstance",
    "CompositionLayout",
    "ConstructionError",
    "DistinguishedInstance",
    "GadgetKit",
    "Graph",
    "HomredError",
    "InvalidArgument",
    "InvariantViolation",
    "ListHomInstance",
    "NotApplicable",
    "NotFound",
    "SizeReport",
    "annotated_to_list_hom",
    "associated_bipartite",
    "build_blocking_gadget",
    "build_gadget_kit",
    "build_not_gadget",
    "builtin",
    "classify_hardness",
    "cross_compose",
    "derive_special_triples",
    "enumerate_all_hom",
    "find_asteroid",
    "find_avoiding_walks",
    "find_extended_p4",
    "find_long_induced_cycle",
    "has_k_clique",
    "is_consistent_instance",
    "lift_consistent_to_H",
    "reduce_for_target",
    "size_report",
    "solve_annotated_p4",
    "solve_list_hom",
    "synthesize_unequal_gadget",
    "verify_gadget",
    "walk_chain_instance",
]
