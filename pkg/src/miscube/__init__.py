"""Maximal independent sets and induced matchings of the Hamming cube."""

from .cube import Cube, CubeError, Edge
from .matchings import (CanonicalMatching, Matching, assignment_matching, canonical_matchings,
                        enumerate_induced_matchings, largest_im)
from .mis import InducedSubgraph, MisReport, enumerate_mis, extend_to_mis, is_mis, mis_list
from .peeling import peel, replay

__all__ = ["Cube", "CubeError", "Edge", "CanonicalMatching", "Matching", "assignment_matching",
           "canonical_matchings", "enumerate_induced_matchings", "largest_im", "InducedSubgraph",
           "MisReport", "enumerate_mis", "extend_to_mis", "is_mis", "mis_list", "peel", "replay"]
