"""Synthetic social networks with skill endorsements.

A base acquaintance graph is grown by a node-lifetime model, then one
endorsement digraph per skill is fitted by local search so that the
aggregate endorsement statistics match a target pattern matrix.
"""

from .graph import EndorsementSet, Graph, GraphError
from .growth import GrowthParams, TerminationSpec, generate_base, preset
from .patterns import compute_pattern_matrix, delta, rho
from .reduction import rip_to_rep
from .sampling import SampleSpec, bfs_sample
from .search import local_search, solve

__all__ = [
    "EndorsementSet", "Graph", "GraphError", "GrowthParams", "TerminationSpec",
    "generate_base", "preset", "compute_pattern_matrix", "delta", "rho",
    "rip_to_rep", "SampleSpec", "bfs_sample", "local_search", "solve",
]
__version__ = "0.1.0"
