"""Generic graph rigidity: randomized rank tests, partition certificates and random-graph experiments."""

from .ffrank import Q, FFMatrix, rank
from .graph import Graph, Partition, induced_bipartite, reduced_graph, vertex_split, zero_extension
from .rigidity import RigidityVerdict, is_d_rigid, generic_rank

__version__ = "0.1.0"

__all__ = [
    "Q",
    "FFMatrix",
    "rank",
    "Graph",
    "Partition",
    "induced_bipartite",
    "reduced_graph",
    "vertex_split",
    "zero_extension",
    "RigidityVerdict",
    "is_d_rigid",
    "generic_rank",
]
