import enum
import logging
from collections.abc import Iterable, Sequence
from typing import Optional, Union

import numpy as np

from .options import OPTIONS
from .words import WordLike, fibonacci_words, parse_pell, pell_words, word_keys

logger = logging.getLogger(__name__)

VertexSubset = Union[Sequence[int], np.ndarray]


class BuildLimitExceeded(ValueError):
    """Raised when a graph family is requested above its configured build limit."""


class Graph:
    """Immutable simple undirected graph stored in CSR form.

    Vertices are the contiguous indices ``0 .. n_vertices - 1``. Neighbour
    lists are sorted by index, and each vertex may carry a string label.

    """

    __slots__ = ("_indptr", "_indices", "_labels", "_degrees", "_label_index")

    def __init__(
        self,
        indptr: np.ndarray,
        indices: np.ndarray,
        labels: Optional[Sequence[str]] = None,
    ):
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)

        if indptr.ndim != 1 or indptr.size == 0 or indptr[0] != 0 or indptr[-1] != indices.size:
            raise ValueError("invalid CSR index pointer array")

        n_vertices = indptr.size - 1
        if labels is not None:
            labels = np.asarray(labels, dtype=str)
            if labels.shape != (n_vertices,):
                raise ValueError(f"expected {n_vertices} labels, found {labels.shape[0]}")
            labels.flags.writeable = False

        indptr.flags.writeable = False
        indices.flags.writeable = False

        self._indptr = indptr
        self._indices = indices
        self._labels = labels
        self._degrees = None
        self._label_index = None

    @classmethod
    def from_edges(
        cls,
        n_vertices: int,
        edges: Union[Iterable[tuple[int, int]], np.ndarray],
        labels: Optional[Sequence[str]] = None,
    ) -> "Graph":
        """Build a graph from an edge list (each undirected edge given once)."""
        if n_vertices < 0:
            raise ValueError(f"number of vertices must be non-negative, found {n_vertices}")

        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges)
        edges = edges.astype(np.int64).reshape(-1, 2)

        if edges.size and (edges.min() < 0 or edges.max() >= n_vertices):
            raise IndexError(f"edge endpoint out of range for a graph with {n_vertices} vertices")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValueError("self-loops are not allowed")

        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])

        # one sort of (src, dst) codes gives the CSR order and exposes duplicates
        codes = np.sort(src * n_vertices + dst)
        if np.any(np.diff(codes) == 0):
            raise ValueError("duplicate edges are not allowed")

        counts = np.bincount(src, minlength=n_vertices)
        indptr = np.concatenate([[0], np.cumsum(counts)])

        return cls(indptr, codes % max(n_vertices, 1), labels=labels)

    @property
    def n_vertices(self) -> int:
        return self._indptr.size - 1

    @property
    def n_edges(self) -> int:
        return self._indices.size // 2

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def labels(self) -> Optional[np.ndarray]:
        return self._labels

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            degrees = np.diff(self._indptr)
            degrees.flags.writeable = False
            self._degrees = degrees
        return self._degrees

    def _check_vertex(self, v: int):
        if not 0 <= v < self.n_vertices:
            raise IndexError(f"vertex {v} out of range (graph has {self.n_vertices} vertices)")

    def neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self._indices[self._indptr[v] : self._indptr[v + 1]]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.degrees[v])

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        self._check_vertex(v)
        pos = np.searchsorted(nbrs, v)
        return bool(pos < nbrs.size and nbrs[pos] == v)

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array of pairs ``(u, v)`` with ``u < v``,
        sorted lexicographically.

        """
        rows = np.repeat(np.arange(self.n_vertices, dtype=np.int64), self.degrees)
        mask = self._indices > rows
        return np.column_stack([rows[mask], self._indices[mask]])

    def label(self, v: int) -> str:
        self._check_vertex(v)
        if self._labels is None:
            return str(v)
        return str(self._labels[v])

    def label_index(self, label: str) -> int:
        """Index of the vertex carrying ``label``."""
        if self._labels is None:
            raise ValueError("graph has no vertex labels")
        if self._label_index is None:
            self._label_index = {str(lb): i for i, lb in enumerate(self._labels)}
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"no vertex labelled {label!r}") from None

    def subgraph(self, vertices: VertexSubset) -> "Graph":
        """Induced subgraph; vertex ``k`` of the result is the ``k``-th smallest
        vertex of ``vertices``.

        """
        subset = as_vertex_subset(self, vertices)
        position = np.full(self.n_vertices, -1, dtype=np.int64)
        position[subset] = np.arange(subset.size)

        edges = position[self.edges()]
        edges = edges[(edges >= 0).all(axis=1)]
        labels = None if self._labels is None else self._labels[subset]

        return Graph.from_edges(subset.size, edges, labels=labels)

    def relabel(self, permutation: Sequence[int]) -> "Graph":
        """Return an isomorphic copy where vertex ``v`` becomes ``permutation[v]``."""
        permutation = np.asarray(permutation, dtype=np.int64)
        if not np.array_equal(np.sort(permutation), np.arange(self.n_vertices)):
            raise ValueError("relabelling must be a permutation of the vertex indices")

        labels = None
        if self._labels is not None:
            labels = np.empty_like(self._labels)
            labels[permutation] = self._labels

        return Graph.from_edges(self.n_vertices, permutation[self.edges()], labels=labels)

    def same_adjacency(self, other: "Graph") -> bool:
        return np.array_equal(self._indptr, other._indptr) and np.array_equal(
            self._indices, other._indices
        )

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return False
        return bool(np.all(bfs_distances(self, 0) >= 0))

    def is_bipartite(self) -> bool:
        color = np.full(self.n_vertices, -1, dtype=np.int64)
        for start in range(self.n_vertices):
            if color[start] < 0:
                dist = bfs_distances(self, start)
                reached = dist >= 0
                color[reached] = dist[reached] % 2
        edges = self.edges()
        return bool(np.all(color[edges[:, 0]] != color[edges[:, 1]]))

    def __repr__(self) -> str:
        return f"<Graph n_vertices={self.n_vertices} n_edges={self.n_edges}>"


def as_vertex_subset(graph: Graph, vertices: VertexSubset) -> np.ndarray:
    """Normalize a vertex subset (indices or boolean mask) into a sorted
    array of unique indices.

    """
    arr = np.asarray(vertices)
    if arr.dtype == bool:
        if arr.shape != (graph.n_vertices,):
            raise ValueError("boolean vertex mask must have one entry per vertex")
        return np.flatnonzero(arr)

    arr = np.unique(arr.astype(np.int64).ravel())
    if arr.size and (arr[0] < 0 or arr[-1] >= graph.n_vertices):
        raise IndexError(f"vertex subset out of range (graph has {graph.n_vertices} vertices)")
    return arr


def degree(graph: Graph, v: int) -> int:
    return graph.degree(v)


def bfs_distances(graph: Graph, source: int) -> np.ndarray:
    """Distances from ``source`` to every vertex (-1 for unreachable ones).

    Level-synchronous BFS over the CSR arrays.

    """
    graph._check_vertex(source)
    indptr, indices = graph.indptr, graph.indices

    dist = np.full(graph.n_vertices, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0

    while frontier.size:
        starts = indptr[frontier]
        lengths = indptr[frontier + 1] - starts
        total = int(lengths.sum())
        if total == 0:
            break

        offsets = np.repeat(starts - np.cumsum(lengths) + lengths, lengths)
        nbrs = indices[offsets + np.arange(total)]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])

        level += 1
        dist[nbrs] = level
        frontier = nbrs

    return dist


class Isometry(enum.Enum):
    ISOMETRIC = "isometric"
    NOT_ISOMETRIC = "not isometric"
    DISCONNECTED = "disconnected"


def check_isometric_subset(graph: Graph, vertices: VertexSubset) -> Isometry:
    """Classify the subgraph induced by ``vertices`` as isometric,
    not isometric or disconnected.

    """
    subset = as_vertex_subset(graph, vertices)
    sub = graph.subgraph(subset)

    if not sub.is_connected():
        return Isometry.DISCONNECTED
    if subset.size == graph.n_vertices:
        return Isometry.ISOMETRIC

    for k, v in enumerate(subset):
        if not np.array_equal(bfs_distances(sub, k), bfs_distances(graph, int(v))[subset]):
            return Isometry.NOT_ISOMETRIC

    return Isometry.ISOMETRIC


def is_isometric_subset(graph: Graph, vertices: VertexSubset) -> bool:
    return check_isometric_subset(graph, vertices) is Isometry.ISOMETRIC


def _check_build(name: str, n: int, limit_key: str):
    if n < 0:
        raise ValueError(f"{name} order must be non-negative, found {n}")
    limit = OPTIONS[limit_key]
    if n > limit:
        raise BuildLimitExceeded(
            f"{name} of order {n} exceeds the build limit {limit} (option {limit_key!r})"
        )


def word_labels(words: np.ndarray) -> np.ndarray:
    """Textual labels of the rows of a word matrix."""
    n_words, n = words.shape
    if n == 0:
        return np.full(n_words, "", dtype=str)
    chars = np.ascontiguousarray(words + ord("0"), dtype=np.uint8)
    return chars.view(f"S{n}").ravel().astype(str)


def _flip_edges(words: np.ndarray, keys: np.ndarray, base: int) -> np.ndarray:
    """Edges obtained by turning a single 0 into a 1, kept when the result
    is one of the words.

    """
    n = words.shape[1]
    chunks = []
    for i in range(n):
        rows = np.flatnonzero(words[:, i] == 0)
        target = keys[rows] + base ** (n - 1 - i)
        idx = np.searchsorted(keys, target)
        found = idx < keys.size
        found[found] = keys[idx[found]] == target[found]
        chunks.append(np.column_stack([rows[found], idx[found]]))
    return np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)


def build_pell_graph(n: int) -> Graph:
    """Build the Pell graph of order ``n``.

    Vertices are the Pell strings of length ``n`` in canonical order; two
    vertices are adjacent when one is obtained from the other by a 0/1 flip
    or by replacing a factor 11 with 22.

    """
    _check_build("Pell graph", n, "pell_build_limit")

    words = pell_words(n)
    keys = word_keys(words, 3)
    chunks = [_flip_edges(words, keys, 3)]

    for i in range(n - 1):
        rows = np.flatnonzero((words[:, i] == 1) & (words[:, i + 1] == 1))
        target = keys[rows] + 3 ** (n - 1 - i) + 3 ** (n - 2 - i)
        idx = np.searchsorted(keys, target)
        assert np.array_equal(keys[idx], target)
        chunks.append(np.column_stack([rows, idx]))

    graph = Graph.from_edges(words.shape[0], np.concatenate(chunks), labels=word_labels(words))
    logger.info("built Pell graph of order %d: %r", n, graph)
    return graph


def build_fibonacci_cube(n: int) -> Graph:
    """Build the Fibonacci cube of order ``n`` (Hamming distance one on
    Fibonacci strings).

    """
    _check_build("Fibonacci cube", n, "cube_build_limit")

    words = fibonacci_words(n)
    keys = word_keys(words, 2)
    graph = Graph.from_edges(words.shape[0], _flip_edges(words, keys, 2), labels=word_labels(words))
    logger.info("built Fibonacci cube of order %d: %r", n, graph)
    return graph


def build_hypercube(n: int) -> Graph:
    """Build the hypercube of order ``n`` on all binary strings of length ``n``."""
    _check_build("hypercube", n, "cube_build_limit")

    vertices = np.arange(2**n, dtype=np.int64)
    chunks = []
    for bit in range(n):
        low = vertices[(vertices >> bit) & 1 == 0]
        chunks.append(np.column_stack([low, low | (1 << bit)]))
    edges = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)

    words = ((vertices[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)
    return Graph.from_edges(vertices.size, edges, labels=word_labels(words))


def pell_degree_formula(word: WordLike) -> int:
    """Degree of ``word`` in its Pell graph, read off the word itself.

    One neighbour per 0 or 1 symbol, one per occurrence of the factor 11
    (overlaps counted) and one per 22 pair.

    """
    symbols = parse_pell(word)
    flips = sum(1 for s in symbols if s != 2)
    factors_11 = sum(1 for a, b in zip(symbols, symbols[1:]) if a == b == 1)
    pairs_22 = symbols.count(2) // 2
    return flips + factors_11 + pairs_22


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycles need at least 3 vertices, found {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])
