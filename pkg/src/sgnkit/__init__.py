"""Subgraph networks (SGNs) for structural feature-space expansion."""

__version__ = "0.1.0"

from .datasets import GraphDataset, DatasetStats, load_dataset, load_edge_list, load_tu_dataset, write_graph
from .features import FeatureConfig, FeatureVector, extract_features
from .graph import Graph, adjacency_matrix, connected_components, degree, new_graph, permute_nodes
from .sgn import SgnConfig, SgnGraph, line_graph, sgn, sgn2_literal
from .wl import WlConfig, WlVocabulary, wl_feature_matrix, wl_relabel

__all__ = [
    "Graph", "new_graph", "degree", "connected_components", "permute_nodes", "adjacency_matrix",
    "GraphDataset", "DatasetStats", "load_dataset", "load_tu_dataset", "load_edge_list", "write_graph",
    "SgnGraph", "SgnConfig", "line_graph", "sgn", "sgn2_literal",
    "FeatureConfig", "FeatureVector", "extract_features",
    "WlConfig", "WlVocabulary", "wl_relabel", "wl_feature_matrix",
]
