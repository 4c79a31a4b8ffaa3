"""Weisfeiler-Lehman subtree pattern counts.

Each relabelling round replaces a node's label with a compressed id of
(round, own label, sorted neighbour labels). A graph's feature row counts
how often each compressed id occurs across rounds ``0..h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence, Union

import numpy as np

from .datasets import GraphDataset
from .graph import Graph
from .sgn import SgnGraph

NODE_LABELS = "node-labels"
DEGREE = "degree"


@dataclass(frozen=True)
class WlConfig:
    height: int = 2
    init: str = NODE_LABELS

    def __post_init__(self):
        if self.height < 0:
            raise ValueError(f"height must be >= 0, got {self.height}")
        if self.init not in (NODE_LABELS, DEGREE):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass
class WlVocabulary:
    """Signature -> dense pattern id, assigned in first-encounter order."""

    ids: dict[Hashable, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.ids)

    def lookup(self, signature: Hashable) -> int:
        pid = self.ids.get(signature)
        if pid is None:
            pid = self.ids[signature] = len(self.ids)
        return pid


def wl_relabel(g: Union[Graph, SgnGraph], cfg: WlConfig, vocab: WlVocabulary) -> list[list[int]]:
    """Pattern ids per node for rounds ``0..cfg.height``; extends ``vocab``."""
    if isinstance(g, SgnGraph):
        g = g.graph
    if cfg.init == NODE_LABELS:
        if g.node_labels is None:
            raise ValueError("graph has no node labels; use init='degree'")
        base = list(g.node_labels)
    else:
        base = g.degrees()
    labels = [vocab.lookup((0, b, ())) for b in base]
    rounds = [labels]
    for it in range(1, cfg.height + 1):
        prev = rounds[-1]
        labels = [
            vocab.lookup((it, prev[v], tuple(sorted(prev[w] for w in nbrs))))
            for v, nbrs in enumerate(g.adjacency)
        ]
        rounds.append(labels)
    return rounds


def wl_feature_matrix(
    ds: Union[GraphDataset, Sequence[Graph]],
    cfg: WlConfig = WlConfig(),
    vocab: WlVocabulary | None = None,
) -> np.ndarray:
    """Graphs x patterns count matrix over a shared vocabulary."""
    graphs = ds.graphs if isinstance(ds, GraphDataset) else list(ds)
    vocab = vocab if vocab is not None else WlVocabulary()
    per_graph = [wl_relabel(g, cfg, vocab) for g in graphs]
    out = np.zeros((len(graphs), len(vocab)), dtype=float)
    for row, rounds in enumerate(per_graph):
        for labels in rounds:
            np.add.at(out[row], labels, 1.0)
    return out


def default_init(ds: GraphDataset) -> str:
    """Node labels when every graph carries them, degree otherwise."""
    if ds.graphs and all(g.node_labels is not None for g in ds.graphs):
        return NODE_LABELS
    return DEGREE
