"""Isometric expansions, contractions and partial cube recognition.

An expansion of a graph G with respect to V1, V2 (V1 ∪ V2 = V(G)) replaces
every vertex of V1 ∩ V2 by two adjacent copies, giving a copy of <V1> and
a copy of <V2> joined by a perfect matching. Contraction undoes this along
the W-sets of an edge, and a graph is a partial cube exactly when iterated
contraction reaches K_1.

"""
import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Literal, Optional, Union

import numpy as np

from .graphs import Graph, Isometry, VertexSubset, as_vertex_subset, bfs_distances, check_isometric_subset
from .irregularity import irr
from .options import OPTIONS

logger = logging.getLogger(__name__)


class InvalidExpansionSpec(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid expansion spec: " + "; ".join(violations))


class NotContractible(ValueError):
    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        message = f"not contractible ({reason})"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class SamplingBudgetExceeded(RuntimeError):
    """Raised when no valid expansion spec was found within the sampling budget."""


@dataclass(frozen=True, eq=False)
class ExpansionSpec:
    """The sets (V1, V2) an expansion of ``host`` is made with respect to."""

    host: Graph
    v1: np.ndarray
    v2: np.ndarray

    @classmethod
    def create(cls, host: Graph, v1: VertexSubset, v2: VertexSubset) -> "ExpansionSpec":
        return cls(host, as_vertex_subset(host, v1), as_vertex_subset(host, v2))

    @property
    def intersection(self) -> np.ndarray:
        return np.intersect1d(self.v1, self.v2, assume_unique=True)

    @property
    def only_v1(self) -> np.ndarray:
        return np.setdiff1d(self.v1, self.v2, assume_unique=True)

    @property
    def only_v2(self) -> np.ndarray:
        return np.setdiff1d(self.v2, self.v1, assume_unique=True)

    @property
    def is_peripheral(self) -> bool:
        n = self.host.n_vertices
        return self.v1.size == n or self.v2.size == n

    @property
    def is_doubling(self) -> bool:
        n = self.host.n_vertices
        return self.v1.size == n and self.v2.size == n

    def to_json(self) -> dict[str, list[int]]:
        return {"v1": self.v1.tolist(), "v2": self.v2.tolist()}


def doubling_spec(graph: Graph) -> ExpansionSpec:
    everything = np.arange(graph.n_vertices)
    return ExpansionSpec(graph, everything, everything)


def validate_spec(spec: ExpansionSpec) -> list[str]:
    """Return the list of violated expansion conditions (empty if valid)."""
    host = spec.host
    violations = []

    missing = np.setdiff1d(np.arange(host.n_vertices), np.union1d(spec.v1, spec.v2))
    if missing.size:
        violations.append(f"V1 and V2 do not cover vertices {missing.tolist()}")

    if spec.intersection.size == 0:
        violations.append("V1 and V2 are disjoint")

    for name, subset in (("V1", spec.v1), ("V2", spec.v2)):
        status = check_isometric_subset(host, subset)
        if status is not Isometry.ISOMETRIC:
            violations.append(f"<{name}> is {status.value}")

    only1 = np.zeros(host.n_vertices, dtype=bool)
    only2 = np.zeros(host.n_vertices, dtype=bool)
    only1[spec.only_v1] = True
    only2[spec.only_v2] = True
    edges = host.edges()
    cross = edges[(only1[edges[:, 0]] & only2[edges[:, 1]]) | (only2[edges[:, 0]] & only1[edges[:, 1]])]
    for u, v in cross[:5]:
        violations.append(f"edge ({u}, {v}) joins V1\\V2 to V2\\V1")
    if cross.shape[0] > 5:
        violations.append(f"... {cross.shape[0] - 5} more edges join V1\\V2 to V2\\V1")

    return violations


@dataclass(frozen=True, eq=False)
class Expansion:
    """Result of an expansion, with the provenance of every new vertex.

    Vertex ``h`` of ``graph`` is the copy of host vertex ``origin[h]`` on
    side ``side[h]`` (1 or 2).

    """

    spec: ExpansionSpec
    graph: Graph
    origin: np.ndarray
    side: np.ndarray


def expand(spec: ExpansionSpec) -> Expansion:
    """Expand ``spec.host`` with respect to ``spec.v1`` and ``spec.v2``.

    The first ``|V1|`` vertices of the result are the copies of V1 (in
    index order), followed by the copies of V2.

    """
    violations = validate_spec(spec)
    if violations:
        raise InvalidExpansionSpec(violations)

    host = spec.host
    k1, k2 = spec.v1.size, spec.v2.size

    pos1 = np.full(host.n_vertices, -1, dtype=np.int64)
    pos2 = np.full(host.n_vertices, -1, dtype=np.int64)
    pos1[spec.v1] = np.arange(k1)
    pos2[spec.v2] = k1 + np.arange(k2)

    edges = host.edges()
    e1 = pos1[edges]
    e2 = pos2[edges]
    inter = spec.intersection

    new_edges = np.concatenate(
        [
            e1[(e1 >= 0).all(axis=1)],
            e2[(e2 >= 0).all(axis=1)],
            np.column_stack([pos1[inter], pos2[inter]]),
        ]
    )

    origin = np.concatenate([spec.v1, spec.v2])
    side = np.concatenate([np.ones(k1, dtype=np.int64), np.full(k2, 2, dtype=np.int64)])

    return Expansion(spec, Graph.from_edges(k1 + k2, new_edges), origin, side)


@dataclass(frozen=True, eq=False)
class ThetaSets:
    """W, U and F sets of the edge ``uv``.

    Rows of ``f_uv`` are oriented from ``u_uv`` to ``u_vu``.

    """

    graph: Graph
    u: int
    v: int
    w_uv: np.ndarray
    w_vu: np.ndarray
    u_uv: np.ndarray
    u_vu: np.ndarray
    f_uv: np.ndarray

    @property
    def is_partition(self) -> bool:
        return self.w_uv.size + self.w_vu.size == self.graph.n_vertices

    @property
    def is_matching(self) -> bool:
        n_f = self.f_uv.shape[0]
        return n_f == self.u_uv.size == self.u_vu.size


def theta_sets(graph: Graph, edge: tuple[int, int]) -> ThetaSets:
    u, v = int(edge[0]), int(edge[1])
    if not graph.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge of the graph")

    du = bfs_distances(graph, u)
    if np.any(du < 0):
        raise ValueError("W-sets are only defined on connected graphs")
    dv = bfs_distances(graph, v)

    closer_u = du < dv
    closer_v = dv < du

    edges = graph.edges()
    a, b = edges[:, 0], edges[:, 1]
    forward = closer_u[a] & closer_v[b]
    backward = closer_v[a] & closer_u[b]
    f_uv = np.concatenate([edges[forward], edges[backward][:, ::-1]])
    f_uv = f_uv[np.lexsort((f_uv[:, 1], f_uv[:, 0]))]

    return ThetaSets(
        graph=graph,
        u=u,
        v=v,
        w_uv=np.flatnonzero(closer_u),
        w_vu=np.flatnonzero(closer_v),
        u_uv=np.unique(f_uv[:, 0]),
        u_vu=np.unique(f_uv[:, 1]),
        f_uv=f_uv,
    )


@dataclass(frozen=True, eq=False)
class Contraction:
    """Contraction of ``original`` along the W-sets of ``edge``.

    ``image[x]`` is the vertex of ``graph`` that vertex ``x`` of ``original``
    is identified with, and ``to_original`` maps every vertex of
    ``expansion.graph`` back to ``original``.

    """

    original: Graph
    edge: tuple[int, int]
    theta: ThetaSets
    graph: Graph
    spec: ExpansionSpec
    image: np.ndarray
    expansion: Expansion
    to_original: np.ndarray


def contract(graph: Graph, edge: Optional[tuple[int, int]] = None) -> Contraction:
    """Contract ``graph`` along the W-sets of ``edge`` (the smallest edge in
    lexicographic order if not given).

    The returned spec expands back to ``graph``; this round trip is checked
    edge by edge through the tracked provenance.

    """
    if not graph.is_connected():
        raise NotContractible("disconnected")
    if edge is None:
        edges = graph.edges()
        if edges.shape[0] == 0:
            raise NotContractible("not-partition", "graph has no edges")
        edge = (int(edges[0, 0]), int(edges[0, 1]))

    theta = theta_sets(graph, edge)
    if not theta.is_partition:
        raise NotContractible("not-partition", f"W-sets of edge {edge} miss equidistant vertices")
    if not theta.is_matching:
        raise NotContractible("not-matching", f"F-set of edge {edge} is not a perfect matching")

    n = graph.n_vertices
    merged = np.zeros(n, dtype=bool)
    merged[theta.u_vu] = True
    kept = np.flatnonzero(~merged)

    image = np.full(n, -1, dtype=np.int64)
    image[kept] = np.arange(kept.size)
    image[theta.f_uv[:, 1]] = image[theta.f_uv[:, 0]]

    in_f = np.zeros(n, dtype=bool)
    in_f[theta.u_uv] = True
    edges = graph.edges()
    crossing = (in_f[edges[:, 0]] & merged[edges[:, 1]]) | (merged[edges[:, 0]] & in_f[edges[:, 1]])
    is_f = crossing & (image[edges[:, 0]] == image[edges[:, 1]])
    new_edges = np.unique(np.sort(image[edges[~is_f]], axis=1), axis=0)

    labels = None if graph.labels is None else graph.labels[kept]
    contracted = Graph.from_edges(kept.size, new_edges, labels=labels)
    spec = ExpansionSpec.create(contracted, image[theta.w_uv], image[theta.w_vu])

    violations = validate_spec(spec)
    if violations:
        raise NotContractible("invalid-spec", "; ".join(violations))

    expansion = expand(spec)

    inverse1 = np.full(kept.size, -1, dtype=np.int64)
    inverse2 = np.full(kept.size, -1, dtype=np.int64)
    inverse1[image[theta.w_uv]] = theta.w_uv
    inverse2[image[theta.w_vu]] = theta.w_vu
    to_original = np.where(
        expansion.side == 1, inverse1[expansion.origin], inverse2[expansion.origin]
    )

    if not _maps_onto(expansion.graph, to_original, graph):
        raise NotContractible("round-trip", f"expansion along edge {edge} does not rebuild the graph")

    logger.debug("contracted %r along edge %s into %r", graph, edge, contracted)
    return Contraction(graph, edge, theta, contracted, spec, image, expansion, to_original)


def _maps_onto(expanded: Graph, to_original: np.ndarray, original: Graph) -> bool:
    if expanded.n_vertices != original.n_vertices:
        return False
    if not np.array_equal(np.sort(to_original), np.arange(original.n_vertices)):
        return False
    return expanded.relabel(to_original).same_adjacency(original)


@dataclass(frozen=True, eq=False)
class PartialCubeCertificate:
    """Contraction steps from the input graph down to K_1.

    Read backwards, the steps' specs form an expansion sequence from K_1.
    ``failure`` is set when some contraction step failed.

    """

    graph: Graph
    steps: list[Contraction] = field(default_factory=list)
    failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def expansion_sequence(self) -> list[ExpansionSpec]:
        return [step.spec for step in reversed(self.steps)]

    def replay(self) -> bool:
        """Expand from K_1 again and check every step against the graph it
        was contracted from.

        """
        if not self.ok:
            return False

        current = self.steps[-1].graph if self.steps else self.graph
        if current.n_vertices != 1:
            return False

        for step in reversed(self.steps):
            if not step.spec.host.same_adjacency(current):
                return False
            expanded = expand(step.spec)
            if not _maps_onto(expanded.graph, step.to_original, step.original):
                return False
            current = step.original

        return current.same_adjacency(self.graph)

    def to_json(self) -> list[dict[str, list[int]]]:
        return [spec.to_json() for spec in self.expansion_sequence]


def recognize_partial_cube(graph: Graph) -> PartialCubeCertificate:
    """Contract repeatedly until K_1 is reached or some step fails."""
    if graph.n_vertices == 0:
        return PartialCubeCertificate(graph, failure="empty graph")
    if not graph.is_connected():
        return PartialCubeCertificate(graph, failure="disconnected graph")

    steps = []
    current = graph
    while current.n_vertices > 1:
        try:
            step = contract(current)
        except NotContractible as err:
            logger.info("partial cube recognition stopped at step %d: %s", len(steps), err)
            return PartialCubeCertificate(graph, steps, failure=f"step {len(steps)}: {err}")
        steps.append(step)
        current = step.graph

    logger.info("%r is a partial cube (%d contraction steps)", graph, len(steps))
    return PartialCubeCertificate(graph, steps)


def is_partial_cube(graph: Graph) -> bool:
    return recognize_partial_cube(graph).ok


def _neighbor_counts(graph: Graph, mask: np.ndarray) -> np.ndarray:
    """Number of neighbours inside ``mask`` for every vertex."""
    rows = np.repeat(np.arange(graph.n_vertices), graph.degrees)
    return np.bincount(rows[mask[graph.indices]], minlength=graph.n_vertices)


def _masks(spec: ExpansionSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = spec.host.n_vertices
    inter, only1, only2 = (np.zeros(n, dtype=bool) for _ in range(3))
    inter[spec.intersection] = True
    only1[spec.only_v1] = True
    only2[spec.only_v2] = True
    return inter, only1, only2


def irr_expansion_host(spec: ExpansionSpec) -> int:
    """Irregularity of the expansion computed on the host graph alone.

    A vertex x of the copy of <Vi> has degree deg_<Vi>(x) + [x in V1 ∩ V2],
    which gives the imbalance of every edge inside a copy. The matching edge
    of x in V1 ∩ V2 has imbalance | |N(x) ∩ (V1 \\ V2)| - |N(x) ∩ (V2 \\ V1)| |.

    """
    violations = validate_spec(spec)
    if violations:
        raise InvalidExpansionSpec(violations)

    host = spec.host
    inter, only1, only2 = _masks(spec)

    total = 0
    for subset in (spec.v1, spec.v2):
        copy = host.subgraph(subset)
        degrees = copy.degrees + inter[subset]
        edges = copy.edges()
        total += int(np.abs(degrees[edges[:, 0]] - degrees[edges[:, 1]]).sum())

    in_only1 = _neighbor_counts(host, only1)[inter]
    in_only2 = _neighbor_counts(host, only2)[inter]
    return total + int(np.abs(in_only1 - in_only2).sum())


def irr_expansion_rhs(spec: ExpansionSpec) -> int:
    """Closed expression for the irregularity of the expansion:

    irr(<V1>) + irr(<V2>)
    + sum over v in V1 ∩ V2 of (deg(v) - |N(v) ∩ V1 ∩ V2|)
    + sum over v in V1 ∩ V2 of | |N(v) ∩ (V1 \\ V2)| - |N(v) ∩ (V2 \\ V1)| |

    It matches the irregularity only when every edge xy of a copy <Vi> with
    x in V1 ∩ V2 and y outside it has deg_<Vi>(x) >= deg_<Vi>(y); otherwise it
    overcounts. :func:`irr_expansion_host` is exact.

    """
    violations = validate_spec(spec)
    if violations:
        raise InvalidExpansionSpec(violations)

    host = spec.host
    inter, only1, only2 = _masks(spec)
    in_inter = _neighbor_counts(host, inter)[inter]
    in_only1 = _neighbor_counts(host, only1)[inter]
    in_only2 = _neighbor_counts(host, only2)[inter]
    degrees = host.degrees[inter]

    return int(
        irr(host.subgraph(spec.v1))
        + irr(host.subgraph(spec.v2))
        + (degrees - in_inter).sum()
        + np.abs(in_only1 - in_only2).sum()
    )


def irr_peripheral_rhs(spec: ExpansionSpec) -> int:
    """Irregularity of a peripheral expansion.

    With V1 = V(G): irr(<V1>) + irr(<V2>) + 2 * sum over v in V2 of |N(v) ∩ (V1 \\ V2)|.
    If only V2 covers V(G), the roles of the two sets are swapped.
    Same degree condition as :func:`irr_expansion_rhs`.

    """
    if not spec.is_peripheral:
        raise ValueError("expansion spec is not peripheral (neither V1 nor V2 is the whole vertex set)")
    violations = validate_spec(spec)
    if violations:
        raise InvalidExpansionSpec(violations)

    host = spec.host
    full, part = (spec.v1, spec.v2) if spec.v1.size == host.n_vertices else (spec.v2, spec.v1)

    outside = np.ones(host.n_vertices, dtype=bool)
    outside[part] = False
    boundary = _neighbor_counts(host, outside)[part].sum()

    return int(irr(host.subgraph(full)) + irr(host.subgraph(part)) + 2 * boundary)


def irr_doubled(graph: Graph) -> int:
    """Irregularity of the expansion of ``graph`` with V1 = V2 = V(G)."""
    return 2 * irr(graph)


def _random_connected_subset(graph: Graph, rng: np.random.Generator) -> np.ndarray:
    n = graph.n_vertices
    target = int(rng.integers(1, n + 1))
    inside = np.zeros(n, dtype=bool)
    inside[int(rng.integers(n))] = True

    for _ in range(target - 1):
        candidates = np.unique(graph.indices[inside[np.repeat(np.arange(n), graph.degrees)]])
        candidates = candidates[~inside[candidates]]
        if candidates.size == 0:
            break
        inside[int(rng.choice(candidates))] = True

    return np.flatnonzero(inside)


def sample_expansion_spec(
    graph: Graph,
    rng: np.random.Generator,
    attempts: Optional[int] = None,
) -> ExpansionSpec:
    """Draw a random valid expansion spec for ``graph``.

    Candidates are built from a random connected subset S: either
    V1 = V(G), V2 = S (peripheral), or V2 = S and V1 the rest of the graph
    plus the vertices of S with a neighbour outside S. Candidates failing
    :func:`validate_spec` are rejected.

    """
    if attempts is None:
        attempts = OPTIONS["sampling_attempts"]

    everything = np.arange(graph.n_vertices)

    for attempt in range(attempts):
        subset = _random_connected_subset(graph, rng)

        if rng.random() < 0.5:
            v1, v2 = everything, subset
        else:
            outside = np.ones(graph.n_vertices, dtype=bool)
            outside[subset] = False
            touching = subset[_neighbor_counts(graph, outside)[subset] > 0]
            v1, v2 = np.union1d(everything[outside], touching), subset

        if rng.random() < 0.5:
            v1, v2 = v2, v1

        spec = ExpansionSpec.create(graph, v1, v2)
        if not validate_spec(spec):
            return spec
        logger.debug("rejected expansion spec candidate %d", attempt)

    raise SamplingBudgetExceeded(f"no valid expansion spec found in {attempts} attempts")


def iter_random_expansions(
    steps: int,
    seed: Union[int, None] = 0,
    strategy: Literal["random", "doubling"] = "random",
    attempts: Optional[int] = None,
) -> Iterator[Expansion]:
    """Yield the successive expansions of a random expansion sequence from K_1."""
    if steps < 0:
        raise ValueError(f"number of expansion steps must be non-negative, found {steps}")
    if strategy not in ("random", "doubling"):
        raise ValueError(f"invalid strategy {strategy!r}, must be 'random' or 'doubling'")

    rng = np.random.default_rng(seed)
    graph = Graph.from_edges(1, [])

    for _ in range(steps):
        if strategy == "doubling":
            spec = doubling_spec(graph)
        else:
            spec = sample_expansion_spec(graph, rng, attempts=attempts)
        expansion = expand(spec)
        yield expansion
        graph = expansion.graph


def random_expansion_sequence(
    steps: int,
    seed: Union[int, None] = 0,
    strategy: Literal["random", "doubling"] = "random",
    attempts: Optional[int] = None,
) -> Graph:
    """Graph obtained from K_1 by ``steps`` random expansions (deterministic
    for a given seed).

    """
    graph = Graph.from_edges(1, [])
    for expansion in iter_random_expansions(steps, seed, strategy=strategy, attempts=attempts):
        graph = expansion.graph
    return graph


def example_expansion_spec() -> ExpansionSpec:
    """Seven-vertex example: a 4-cycle with a pendant vertex glued along
    the edge ``bc`` to a second 4-cycle, with V1 = {a, b, c, d, e} and
    V2 = {b, c, f, g}.

    """
    labels = ["a", "b", "c", "d", "e", "f", "g"]
    index = {lb: i for i, lb in enumerate(labels)}
    edges = ["ab", "bc", "cd", "da", "ce", "cg", "gf", "fb"]
    host = Graph.from_edges(
        len(labels), [(index[e[0]], index[e[1]]) for e in edges], labels=labels
    )
    return ExpansionSpec.create(host, [index[c] for c in "abcde"], [index[c] for c in "bcfg"])
