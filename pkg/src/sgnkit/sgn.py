"""Subgraph network (SGN) construction.

An order-1 SGN is the line graph: one node per link, two nodes adjacent when
their links share an end node. Higher orders iterate the line graph, so an
order-2 node is a wedge (two links sharing a node) and two wedges are
adjacent when they share a link. ``sgn2_literal`` keeps the alternative
per-center construction where all wedges around one center form a clique.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Union

from .graph import Graph, new_graph

ITERATED_LINE = "iterated-line"
ALGORITHM2_LITERAL = "algorithm2-literal"
RULES = (ITERATED_LINE, ALGORITHM2_LITERAL)


class SgnError(ValueError):
    pass


@dataclass(frozen=True)
class SgnGraph:
    """A graph whose nodes stand for subgraphs of an original graph.

    ``provenance[i]`` is the sorted tuple of original node ids covered by
    node ``i``; ``identity[i]`` is a hashable key that tells apart nodes with
    equal provenance (for example the three wedges of a closed triangle).
    """

    graph: Graph
    order: int
    provenance: tuple[tuple[int, ...], ...]
    identity: tuple[Hashable, ...]

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def num_links(self) -> int:
        return self.graph.num_links

    def labels(self) -> list[str]:
        """Provenance rendered as ``"a_b_c"`` strings."""
        return ["_".join(str(v) for v in p) for p in self.provenance]


@dataclass(frozen=True)
class SgnConfig:
    order: int = 1
    rule: str = ITERATED_LINE

    def __post_init__(self):
        if self.order < 0:
            raise SgnError(f"order must be >= 0, got {self.order}")
        if self.rule not in RULES:
            raise SgnError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        if self.rule == ALGORITHM2_LITERAL and self.order != 2:
            raise SgnError("algorithm2-literal rule is defined for order 2 only")


def as_sgn(g: Union[Graph, SgnGraph]) -> SgnGraph:
    """Wrap a plain graph as its own order-0 SGN."""
    if isinstance(g, SgnGraph):
        return g
    n = g.num_nodes
    return SgnGraph(
        graph=g,
        order=0,
        provenance=tuple((i,) for i in range(n)),
        identity=tuple(range(n)),
    )


def line_graph(g: Union[Graph, SgnGraph]) -> SgnGraph:
    """One step of SGN construction; the result has order one higher than ``g``."""
    src = as_sgn(g)
    base = src.graph
    links = base.edges()
    link_id = {e: k for k, e in enumerate(links)}

    new_edges = []
    for v, nbrs in enumerate(base.adjacency):
        # all links incident to v share exactly this end node, so they form a clique
        incident = [link_id[(v, w) if v < w else (w, v)] for w in nbrs]
        new_edges.extend(combinations(incident, 2))

    identity = []
    provenance = []
    for i, j in links:
        a, b = src.identity[i], src.identity[j]
        identity.append((a, b) if a <= b else (b, a))
        provenance.append(tuple(sorted(set(src.provenance[i]) | set(src.provenance[j]))))

    return SgnGraph(
        graph=new_graph(len(links), new_edges, class_label=base.class_label, graph_id=base.graph_id),
        order=src.order + 1,
        provenance=tuple(provenance),
        identity=tuple(identity),
    )


def sgn2_literal(g: Graph) -> SgnGraph:
    """Per-center wedge cliques: every wedge centred at ``v`` links to every other."""
    identity = []
    provenance = []
    new_edges = []
    for v, nbrs in enumerate(g.adjacency):
        first = len(identity)
        for w1, w2 in combinations(nbrs, 2):
            identity.append((v, w1, w2))
            provenance.append(tuple(sorted((v, w1, w2))))
        new_edges.extend(combinations(range(first, len(identity)), 2))
    return SgnGraph(
        graph=new_graph(len(identity), new_edges, class_label=g.class_label, graph_id=g.graph_id),
        order=2,
        provenance=tuple(provenance),
        identity=tuple(identity),
    )


def sgn(g: Graph, cfg: SgnConfig = SgnConfig()) -> SgnGraph:
    if cfg.rule == ALGORITHM2_LITERAL:
        return sgn2_literal(g)
    out = as_sgn(g)
    for _ in range(cfg.order):
        out = line_graph(out)
    return out


def sgn_series(g: Graph, max_order: int, rule: str = ITERATED_LINE) -> list[SgnGraph]:
    """SGNs of orders ``0..max_order``; each iterated order reuses the previous one."""
    if rule not in RULES:
        raise SgnError(f"unknown rule {rule!r}; expected one of {RULES}")
    if rule == ALGORITHM2_LITERAL and max_order > 2:
        raise SgnError("algorithm2-literal rule is defined for order 2 only")
    out = [as_sgn(g)]
    for k in range(1, max_order + 1):
        if rule == ALGORITHM2_LITERAL and k == 2:
            out.append(sgn2_literal(g))
        else:
            out.append(line_graph(out[-1]))
    return out
