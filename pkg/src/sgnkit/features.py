"""Handcrafted structural features of a graph.

Eleven topology-only features, in fixed order: node count, link count,
average degree, leaf fraction, average clustering, largest adjacency
eigenvalue, density, and the averages of betweenness, closeness,
eigenvector centrality and neighbour degree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import astuple, dataclass, fields
from typing import Union

import numpy as np

from .graph import Graph, adjacency_matrix
from .sgn import SgnGraph

FEATURE_NAMES = ("N", "L", "K", "P", "C", "lambda", "D", "C_B", "C_C", "C_E", "D_N")


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class FeatureConfig:
    eigen_dense_threshold: int = 256
    power_iter_max: int = 10_000
    power_iter_tol: float = 1e-10

    def __post_init__(self):
        if self.power_iter_tol <= 0:
            raise ValueError("power_iter_tol must be positive")
        if self.power_iter_max < 1:
            raise ValueError("power_iter_max must be >= 1")


@dataclass(frozen=True)
class FeatureVector:
    n_nodes: float
    n_links: float
    avg_degree: float
    pct_leaf: float
    avg_clustering: float
    largest_eigenvalue: float
    density: float
    avg_betweenness: float
    avg_closeness: float
    avg_eigenvector: float
    avg_neighbor_degree: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def zeros(cls) -> "FeatureVector":
        return cls(*([0.0] * len(fields(cls))))


def _plain(g: Union[Graph, SgnGraph]) -> Graph:
    return g.graph if isinstance(g, SgnGraph) else g


def pct_leaf(g) -> float:
    g = _plain(g)
    if g.num_nodes == 0:
        return 0.0
    return sum(1 for nbrs in g.adjacency if len(nbrs) == 1) / g.num_nodes


def avg_clustering(g) -> float:
    g = _plain(g)
    if g.num_nodes == 0:
        return 0.0
    nbr_sets = [set(nbrs) for nbrs in g.adjacency]
    total = 0.0
    for i, nbrs in enumerate(g.adjacency):
        k = len(nbrs)
        if k < 2:
            continue
        # each link among neighbours is seen twice
        links = sum(len(nbr_sets[u] & nbr_sets[i]) for u in nbrs) / 2
        total += 2.0 * links / (k * (k - 1))
    return total / g.num_nodes


def density(g) -> float:
    g = _plain(g)
    n = g.num_nodes
    if n < 2:
        return 0.0
    return 2.0 * g.num_links / (n * (n - 1))


def _dominant_dense(a: np.ndarray, tol: float) -> tuple[float, np.ndarray]:
    vals, vecs = np.linalg.eigh(a)
    lam = float(vals[-1])
    # top eigenspace can be degenerate (equal components); pick the vector the
    # uniform-start power iteration would converge to
    top = vecs[:, vals >= lam - max(tol, 1e-9) * max(1.0, abs(lam))]
    x = top @ (top.T @ np.ones(a.shape[0]))
    return lam, x / np.linalg.norm(x)


def _dominant_power(a: np.ndarray, cfg: FeatureConfig) -> tuple[float, np.ndarray]:
    n = a.shape[0]
    # the +I shift breaks the +/-lambda tie of bipartite graphs
    shifted = a + np.eye(n)
    x = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(cfg.power_iter_max):
        y = shifted @ x
        y /= np.linalg.norm(y)
        if np.max(np.abs(y - x)) < cfg.power_iter_tol:
            return float(y @ a @ y), y
        x = y
    raise ConvergenceError(
        f"power iteration did not converge in {cfg.power_iter_max} steps"
    )


def dominant_eigenpair(g, cfg: FeatureConfig = FeatureConfig()) -> tuple[float, np.ndarray]:
    """Largest adjacency eigenvalue and its nonnegative unit eigenvector."""
    g = _plain(g)
    if g.num_links == 0:
        return 0.0, np.zeros(g.num_nodes)
    a = adjacency_matrix(g)
    if g.num_nodes < cfg.eigen_dense_threshold:
        lam, x = _dominant_dense(a, cfg.power_iter_tol)
    else:
        lam, x = _dominant_power(a, cfg)
    # a Perron vector is one-signed; fix the sign and clip rounding noise
    if x.sum() < 0:
        x = -x
    return lam, np.clip(x, 0.0, None)


def largest_eigenvalue(g, cfg: FeatureConfig = FeatureConfig()) -> float:
    return dominant_eigenpair(g, cfg)[0]


def avg_eigenvector(g, cfg: FeatureConfig = FeatureConfig()) -> float:
    g = _plain(g)
    if g.num_nodes == 0:
        return 0.0
    return float(dominant_eigenpair(g, cfg)[1].mean())


def betweenness(g) -> np.ndarray:
    """Per-node betweenness over unordered source/target pairs, unnormalised.

    Brandes accumulation over unweighted BFS trees; every unordered pair is
    counted from both ends, hence the final halving.
    """
    g = _plain(g)
    n = g.num_nodes
    cb = np.zeros(n)
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in g.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return cb / 2.0


def avg_betweenness(g) -> float:
    g = _plain(g)
    if g.num_nodes == 0:
        return 0.0
    return float(betweenness(g).mean())


def _bfs_distances(g: Graph, s: int) -> dict[int, int]:
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def closeness(g) -> np.ndarray:
    """Per-node closeness, computed inside each component.

    A node in a component of ``r`` nodes gets ``(r-1)/sum(d)`` scaled by
    ``(r-1)/(N-1)``; isolated nodes get 0.
    """
    g = _plain(g)
    n = g.num_nodes
    out = np.zeros(n)
    for s in range(n):
        dist = _bfs_distances(g, s)
        r = len(dist)
        if r > 1:
            out[s] = (r - 1) / sum(dist.values()) * (r - 1) / (n - 1)
    return out


def avg_closeness(g) -> float:
    g = _plain(g)
    if g.num_nodes == 0:
        return 0.0
    return float(closeness(g).mean())


def avg_neighbor_degree(g) -> float:
    g = _plain(g)
    if g.num_nodes == 0:
        return 0.0
    deg = g.degrees()
    total = 0.0
    for nbrs in g.adjacency:
        if nbrs:
            total += sum(deg[j] for j in nbrs) / len(nbrs)
    return total / g.num_nodes


def extract_features(g, cfg: FeatureConfig = FeatureConfig()) -> FeatureVector:
    """All eleven features; graphs without nodes or links map to the zero vector."""
    g = _plain(g)
    n, links = g.num_nodes, g.num_links
    if n == 0 or links == 0:
        return FeatureVector.zeros()
    lam, vec = dominant_eigenpair(g, cfg)
    return FeatureVector(
        n_nodes=float(n),
        n_links=float(links),
        avg_degree=2.0 * links / n,
        pct_leaf=pct_leaf(g),
        avg_clustering=avg_clustering(g),
        largest_eigenvalue=lam,
        density=density(g),
        avg_betweenness=avg_betweenness(g),
        avg_closeness=avg_closeness(g),
        avg_eigenvector=float(vec.mean()),
        avg_neighbor_degree=avg_neighbor_degree(g),
    )
