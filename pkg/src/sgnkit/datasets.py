"""Reading and writing graphs: TU benchmark directories and plain edge lists."""

from __future__ import annotations

import os
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .graph import Graph, GraphError, new_graph
from .sgn import SgnGraph

DATA_ROOT_ENV = "SGN_DATA_ROOT"

# short names used in the literature -> TU archive names
ALIASES = {
    "PTC": "PTC_MR",
    "IMDB-B": "IMDB-BINARY",
    "REDDIT-B": "REDDIT-BINARY",
}

PathLike = Union[str, os.PathLike]


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetStats:
    num_graphs: int
    num_classes: int
    num_positive: int
    num_negative: int

    def __str__(self) -> str:
        return f"{self.num_graphs} {self.num_classes} {self.num_positive} {self.num_negative}"


@dataclass(frozen=True)
class GraphDataset:
    name: str
    graphs: tuple[Graph, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.graphs) != len(self.labels):
            raise DatasetError(
                f"{len(self.graphs)} graphs but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.graphs)

    def stats(self) -> DatasetStats:
        pos = sum(1 for y in self.labels if y == 1)
        return DatasetStats(
            num_graphs=len(self.labels),
            num_classes=len(set(self.labels)),
            num_positive=pos,
            num_negative=len(self.labels) - pos,
        )


def _read_ints(path: Path) -> list[list[int]]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([int(tok) for tok in re.split(r"[,\s]+", line) if tok])
            except ValueError as exc:
                raise DatasetError(f"{path}:{lineno}: cannot parse {line!r}") from exc
    return rows


def binarize_labels(raw: Sequence[int]) -> list[int]:
    """Map two distinct raw class values to 0 (smaller) and 1 (larger)."""
    values = sorted(set(raw))
    if len(values) != 2:
        raise DatasetError(f"expected exactly 2 distinct graph labels, found {values}")
    return [values.index(v) for v in raw]


def resolve_dataset_dir(dataset: PathLike, data_root: Optional[PathLike] = None) -> tuple[Path, str]:
    """Find the directory holding a TU dataset given a path or a bare name.

    Bare names are looked up under ``data_root`` (default ``$SGN_DATA_ROOT``),
    both directly and one directory down as TU archives unpack.
    """
    p = Path(dataset)
    if p.is_dir():
        return p, p.name
    name = ALIASES.get(str(dataset), str(dataset))
    root = data_root or os.environ.get(DATA_ROOT_ENV)
    if root is None:
        raise DatasetError(
            f"dataset {dataset!r} is not a directory and ${DATA_ROOT_ENV} is not set"
        )
    for cand in (Path(root) / name, Path(root) / name / name, Path(root) / str(dataset)):
        if (cand / f"{name}_A.txt").exists():
            return cand, name
    raise DatasetError(f"dataset {dataset!r} not found under {root}")


def load_tu_dataset(directory: PathLike, name: Optional[str] = None) -> GraphDataset:
    directory = Path(directory)
    name = name or directory.name

    def part(suffix: str) -> Path:
        return directory / f"{name}_{suffix}.txt"

    for suffix in ("A", "graph_indicator", "graph_labels"):
        if not part(suffix).exists():
            raise DatasetError(f"missing file {part(suffix)}")

    indicator = [row[0] for row in _read_ints(part("graph_indicator"))]
    raw_labels = [row[0] for row in _read_ints(part("graph_labels"))]
    node_labels = None
    if part("node_labels").exists():
        node_labels = [row[0] for row in _read_ints(part("node_labels"))]
        if len(node_labels) != len(indicator):
            raise DatasetError(
                f"{part('node_labels')}: {len(node_labels)} rows, expected {len(indicator)}"
            )

    n_graphs = len(raw_labels)
    members: list[list[int]] = [[] for _ in range(n_graphs)]
    for node, gid in enumerate(indicator):
        if not 1 <= gid <= n_graphs:
            raise DatasetError(f"node {node + 1} assigned to unknown graph {gid}")
        members[gid - 1].append(node)

    local = {}
    for nodes in members:
        for k, node in enumerate(nodes):
            local[node] = k

    edges = defaultdict(list)
    for lineno, row in enumerate(_read_ints(part("A")), 1):
        if len(row) != 2:
            raise DatasetError(f"{part('A')}:{lineno}: expected 2 ids, got {row}")
        i, j = row[0] - 1, row[1] - 1
        if not (0 <= i < len(indicator) and 0 <= j < len(indicator)):
            raise DatasetError(f"{part('A')}:{lineno}: unknown node in {row}")
        if indicator[i] != indicator[j]:
            raise DatasetError(f"{part('A')}:{lineno}: edge {row} spans two graphs")
        if i != j:
            edges[indicator[i] - 1].append((local[i], local[j]))

    labels = binarize_labels(raw_labels)
    graphs = []
    for gid, nodes in enumerate(members):
        if not nodes:
            raise DatasetError(f"graph {gid + 1} has no nodes")
        graphs.append(
            new_graph(
                len(nodes),
                edges[gid],
                node_labels=[node_labels[v] for v in nodes] if node_labels else None,
                class_label=labels[gid],
                graph_id=gid,
            )
        )
    return GraphDataset(name=name, graphs=tuple(graphs), labels=tuple(labels))


def load_dataset(dataset: PathLike, data_root: Optional[PathLike] = None) -> GraphDataset:
    directory, name = resolve_dataset_dir(dataset, data_root)
    return load_tu_dataset(directory, name)


_HEADER = re.compile(r"#\s*N\s*=\s*(\d+)")


def load_edge_list(path: PathLike) -> Graph:
    n_header = 0
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _HEADER.match(line)
                if m:
                    n_header = int(m.group(1))
                continue
            toks = line.split()
            try:
                u, v = int(toks[0]), int(toks[1])
            except (ValueError, IndexError) as exc:
                raise DatasetError(f"{path}:{lineno}: cannot parse {line!r}") from exc
            if len(toks) != 2 or u < 0 or v < 0:
                raise DatasetError(f"{path}:{lineno}: expected two node ids, got {line!r}")
            pairs.append((u, v))
    n = max([n_header] + [max(p) + 1 for p in pairs])
    try:
        return new_graph(n, pairs)
    except GraphError as exc:
        raise DatasetError(f"{path}: {exc}") from exc


def provenance_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".map")


def write_graph(g: Union[Graph, SgnGraph], path: PathLike) -> None:
    """Write an edge list with a ``# N=`` header.

    For SGNs a sidecar ``<path>.map`` lists ``node<TAB>provenance<TAB>identity``
    per line, provenance rendered as ``a_b_c``.
    """
    path = Path(path)
    sg = g if isinstance(g, SgnGraph) else None
    graph = sg.graph if sg else g
    lines = [f"# N={graph.num_nodes}"]
    if sg is not None:
        lines.append(f"# order={sg.order}")
    lines.extend(f"{i} {j}" for i, j in graph.edges())
    path.write_text("\n".join(lines) + "\n")
    if sg is not None:
        rows = [
            f"{i}\t{label}\t{ident!r}".replace(" ", "")
            for i, (label, ident) in enumerate(zip(sg.labels(), sg.identity))
        ]
        provenance_path(path).write_text("".join(r + "\n" for r in rows))
