"""Undirected simple graphs with dense integer node ids."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised when a graph cannot be built or queried as requested."""


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph.

    ``adjacency[i]`` is the sorted tuple of neighbours of node ``i``. Build
    instances through :func:`new_graph`, which validates and deduplicates.
    """

    num_nodes: int
    adjacency: tuple[tuple[int, ...], ...]
    node_labels: Optional[tuple[int, ...]] = None
    class_label: Optional[int] = None
    graph_id: Optional[int] = None

    @property
    def num_links(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        """Links as ``(i, j)`` with ``i < j``, in lexicographic order."""
        return [(i, j) for i, nbrs in enumerate(self.adjacency) for j in nbrs if i < j]

    def __repr__(self) -> str:
        return f"Graph(N={self.num_nodes}, L={self.num_links})"


def new_graph(
    num_nodes: int,
    edges: Iterable[Sequence[int]],
    node_labels: Optional[Sequence[int]] = None,
    class_label: Optional[int] = None,
    graph_id: Optional[int] = None,
) -> Graph:
    """Build a validated graph; duplicate pairs collapse, self-loops are rejected."""
    if num_nodes < 0:
        raise GraphError(f"num_nodes must be nonnegative, got {num_nodes}")
    nbrs: list[set[int]] = [set() for _ in range(num_nodes)]
    for pair in edges:
        i, j = int(pair[0]), int(pair[1])
        if not (0 <= i < num_nodes and 0 <= j < num_nodes):
            raise GraphError(f"edge ({i}, {j}) out of range for {num_nodes} nodes")
        if i == j:
            raise GraphError(f"self-loop on node {i}")
        nbrs[i].add(j)
        nbrs[j].add(i)
    if node_labels is not None:
        if len(node_labels) != num_nodes:
            raise GraphError(
                f"expected {num_nodes} node labels, got {len(node_labels)}"
            )
        node_labels = tuple(int(x) for x in node_labels)
    return Graph(
        num_nodes=num_nodes,
        adjacency=tuple(tuple(sorted(s)) for s in nbrs),
        node_labels=node_labels,
        class_label=class_label,
        graph_id=graph_id,
    )


def _check_node(g: Graph, v: int) -> None:
    if not 0 <= v < g.num_nodes:
        raise GraphError(f"node {v} out of range for {g.num_nodes} nodes")


def degree(g: Graph, v: int) -> int:
    _check_node(g, v)
    return len(g.adjacency[v])


def connected_components(g: Graph) -> list[set[int]]:
    """Maximal connected node sets, ordered by smallest member."""
    seen = [False] * g.num_nodes
    comps = []
    for start in range(g.num_nodes):
        if seen[start]:
            continue
        seen[start] = True
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def permute_nodes(g: Graph, perm: Sequence[int]) -> Graph:
    """Relabel node ``i`` as ``perm[i]``."""
    perm = [int(p) for p in perm]
    if len(perm) != g.num_nodes or sorted(perm) != list(range(g.num_nodes)):
        raise GraphError("perm is not a permutation of the node ids")
    labels = None
    if g.node_labels is not None:
        moved = [0] * g.num_nodes
        for i, lab in enumerate(g.node_labels):
            moved[perm[i]] = lab
        labels = moved
    return new_graph(
        g.num_nodes,
        [(perm[i], perm[j]) for i, j in g.edges()],
        node_labels=labels,
        class_label=g.class_label,
        graph_id=g.graph_id,
    )


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.num_nodes, g.num_nodes), dtype=float)
    for i, nbrs in enumerate(g.adjacency):
        a[i, list(nbrs)] = 1.0
    return a
