"""Edge imbalance and the irregularity measures built on it."""
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .graphs import Graph

EdgeSet = Union[Iterable[tuple[int, int]], np.ndarray]


def _as_edge_array(graph: Graph, edges: EdgeSet) -> np.ndarray:
    if isinstance(edges, np.ndarray):
        arr = edges
    else:
        arr = np.array(list(edges), dtype=np.int64)
    arr = arr.astype(np.int64).reshape(-1, 2)

    for u, v in arr:
        if not graph.has_edge(int(u), int(v)):
            raise ValueError(f"({u}, {v}) is not an edge of the graph")
    return arr


def edge_imbalances(graph: Graph, edges: np.ndarray = None) -> np.ndarray:
    """Imbalance of every edge of ``edges`` (all edges of the graph by default,
    in the order of :meth:`Graph.edges`).

    """
    if edges is None:
        edges = graph.edges()
    degrees = graph.degrees
    return np.abs(degrees[edges[:, 0]] - degrees[edges[:, 1]])


def imbalance(graph: Graph, edge: tuple[int, int]) -> int:
    """Absolute degree difference of the endpoints of ``edge``."""
    u, v = edge
    if not graph.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge of the graph")
    return abs(graph.degree(u) - graph.degree(v))


def irr(graph: Graph) -> int:
    """Irregularity (Albertson index): sum of the imbalances of all edges."""
    return int(edge_imbalances(graph).sum())


def irr_subset(graph: Graph, edges: EdgeSet) -> int:
    """Irregularity of an edge set, i.e. the sum of imbalances over ``edges``."""
    arr = _as_edge_array(graph, edges)
    if arr.size == 0:
        return 0
    return int(edge_imbalances(graph, arr).sum())


def sigma(graph: Graph) -> int:
    """σ-index: sum of squared degree differences over all edges."""
    imb = edge_imbalances(graph)
    return int((imb * imb).sum())


@dataclass(frozen=True)
class ImbalanceHistogram:
    """Number of edges per imbalance value.

    Values absent from ``counts`` have zero edges.

    """

    counts: Mapping[int, int] = field(default_factory=dict)

    def __getitem__(self, k: int) -> int:
        return self.counts.get(k, 0)

    @property
    def n_edges(self) -> int:
        return sum(self.counts.values())

    @property
    def max_imbalance(self) -> int:
        nonzero = [k for k, c in self.counts.items() if c]
        return max(nonzero) if nonzero else 0

    def irr(self) -> int:
        return sum(k * c for k, c in self.counts.items())

    def sigma(self) -> int:
        return sum(k * k * c for k, c in self.counts.items())

    def padded(self, size: int) -> tuple[int, ...]:
        """Counts for imbalance values ``0 .. size - 1``."""
        if self.max_imbalance >= size:
            raise ValueError(f"histogram has imbalance {self.max_imbalance}, beyond size {size}")
        return tuple(self[k] for k in range(size))

    def to_json(self) -> dict[str, int]:
        return {str(k): self.counts[k] for k in sorted(self.counts)}

    def rows(self, n: int) -> Iterator[tuple[int, int, int]]:
        """CSV rows ``(n, k, count)``."""
        for k in sorted(self.counts):
            yield n, k, self.counts[k]


def histogram(graph: Graph) -> ImbalanceHistogram:
    """Count the edges of ``graph`` by imbalance value."""
    imb = edge_imbalances(graph)
    if imb.size == 0:
        return ImbalanceHistogram({})
    counts = np.bincount(imb)
    return ImbalanceHistogram({k: int(c) for k, c in enumerate(counts)})
