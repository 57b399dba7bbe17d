from .uncertain_graph import UncertainGraph
from .parse_graph import parse_edge_list, read_graph, format_edge_list, write_graph, parse_workload, format_workload
from .prob_models import InverseOutDegree, UniformChoice, ExponentialCdf, Fixed, assign_probabilities, model_from_name
from .possible_world import PossibleWorld, sample_world, reachable
from .synthetic import random_graph, chain_graph

__all__ = [
    "UncertainGraph",
    "parse_edge_list",
    "read_graph",
    "format_edge_list",
    "write_graph",
    "parse_workload",
    "format_workload",
    "InverseOutDegree",
    "UniformChoice",
    "ExponentialCdf",
    "Fixed",
    "assign_probabilities",
    "model_from_name",
    "PossibleWorld",
    "sample_world",
    "reachable",
    "random_graph",
    "chain_graph",
]
