"""Structure of Pell graphs: canonical decomposition, edge classification
and the counting formulas for edges by imbalance, irregularity and σ-index.

"""
import enum
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .expansion import Expansion, ExpansionSpec, doubling_spec, expand, irr_expansion_host
from .graphs import Graph, build_pell_graph
from .irregularity import edge_imbalances, irr
from .seq import FormulaError, exact_div, nonnegative, pell
from .words import WordLike, format_word, parse_pell, pell_words, word_keys

logger = logging.getLogger(__name__)

IMBALANCES = range(5)


class Part(str, enum.Enum):
    A = "A"
    B10 = "B10"
    B11 = "B11"
    B122 = "B122"
    C = "C"
    # only the word "1" of length 1 (B without a second symbol)
    B = "B"
    # only the empty word
    EMPTY = "EMPTY"


_PARTS = tuple(Part)
_CODE = {p: k for k, p in enumerate(_PARTS)}
B_PARTS = (Part.B10, Part.B11, Part.B122, Part.B)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Canonical decomposition of the vertices of a Pell graph.

    A = 0P_{n-1}, B = 1P_{n-1} (split into B10, B11 and B122 by the
    leading symbols) and C = 22P_{n-2}.

    """

    n: int
    codes: np.ndarray

    def part_of(self, v: int) -> Part:
        return _PARTS[self.codes[v]]

    def mask(self, *parts: Part) -> np.ndarray:
        return np.isin(self.codes, [_CODE[Part(p)] for p in parts])

    def indices(self, *parts: Part) -> np.ndarray:
        return np.flatnonzero(self.mask(*parts))

    def sizes(self) -> dict[Part, int]:
        counts = np.bincount(self.codes, minlength=len(_PARTS))
        return {p: int(counts[_CODE[p]]) for p in _PARTS}

    def block_codes(self) -> np.ndarray:
        """0 for A, 1 for B, 2 for C (-1 for the empty word)."""
        blocks = np.full(self.codes.size, -1, dtype=np.int64)
        blocks[self.mask(Part.A)] = 0
        blocks[self.mask(*B_PARTS)] = 1
        blocks[self.mask(Part.C)] = 2
        return blocks


def decompose(n: int) -> Decomposition:
    """Tag every vertex of the Pell graph of order ``n`` by its leading symbols."""
    if n < 0:
        raise ValueError(f"Pell graph order must be non-negative, found {n}")

    words = pell_words(n)
    codes = np.full(words.shape[0], _CODE[Part.EMPTY], dtype=np.int8)
    if n == 0:
        return Decomposition(n, codes)

    first = words[:, 0]
    codes[first == 0] = _CODE[Part.A]
    codes[first == 2] = _CODE[Part.C]

    if n == 1:
        codes[first == 1] = _CODE[Part.B]
    else:
        second = words[:, 1]
        codes[(first == 1) & (second == 0)] = _CODE[Part.B10]
        codes[(first == 1) & (second == 1)] = _CODE[Part.B11]
        codes[(first == 1) & (second == 2)] = _CODE[Part.B122]

    codes.flags.writeable = False
    return Decomposition(n, codes)


class EdgeKind(str, enum.Enum):
    FLIP = "flip"
    SWAP = "swap"


@dataclass(frozen=True)
class EdgeClass:
    """Rewrite site of a Pell graph edge and the imbalance it implies.

    ``position`` is the flipped coordinate, or the first coordinate of the
    11/22 pair (0-based). ``left_is_one``/``right_is_one`` read the
    coordinates just outside the site on the all-ones side; missing
    coordinates count as not 1.

    """

    kind: EdgeKind
    position: int
    left_is_one: bool
    right_is_one: bool

    @property
    def predicted_imbalance(self) -> int:
        base = 2 if self.kind is EdgeKind.SWAP else 0
        return base + int(self.left_is_one) + int(self.right_is_one)


def classify_edge(u: WordLike, v: WordLike) -> EdgeClass:
    """Classify the Pell graph edge ``uv``."""
    a, b = parse_pell(u), parse_pell(v)
    if len(a) != len(b):
        raise ValueError(f"{format_word(a)!r} and {format_word(b)!r} have different lengths")

    diff = [k for k, (x, y) in enumerate(zip(a, b)) if x != y]
    n = len(a)

    if len(diff) == 1 and {a[diff[0]], b[diff[0]]} == {0, 1}:
        kind, pos = EdgeKind.FLIP, diff[0]
        ones = a if a[pos] == 1 else b
        right = pos + 1
    elif (
        len(diff) == 2
        and diff[1] == diff[0] + 1
        and {a[diff[0]], b[diff[0]]} == {1, 2}
        and a[diff[0]] == a[diff[1]]
        and b[diff[0]] == b[diff[1]]
    ):
        kind, pos = EdgeKind.SWAP, diff[0]
        ones = a if a[pos] == 1 else b
        right = pos + 2
    else:
        raise ValueError(f"{format_word(a)!r} and {format_word(b)!r} are not adjacent")

    return EdgeClass(
        kind=kind,
        position=pos,
        left_is_one=pos > 0 and ones[pos - 1] == 1,
        right_is_one=right < n and ones[right] == 1,
    )


def predicted_imbalances(graph: Graph, words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`classify_edge` over all edges of a Pell graph.

    Returns a boolean array (True for 11/22 swap edges) and the predicted
    imbalances, both aligned with ``graph.edges()``.

    """
    edges = graph.edges()
    # in canonical order the lower endpoint holds the 0 (flip) or the 11 (swap)
    low, high = words[edges[:, 0]], words[edges[:, 1]]
    diff = low != high
    swap = diff.sum(axis=1) == 2
    pos = np.argmax(diff, axis=1)
    ones = np.where(swap[:, None], low, high)

    padded = np.pad(ones, ((0, 0), (1, 1)))
    rows = np.arange(edges.shape[0])
    left = padded[rows, pos] == 1
    right = padded[rows, pos + 2 + swap] == 1

    predicted = 2 * swap + left.astype(np.int64) + right.astype(np.int64)
    return swap, predicted


# e_n^i for n = 1, 2, 3 and i = 0..4
E_INITIAL: dict[int, tuple[int, ...]] = {
    1: (1, 0, 0, 0, 0),
    2: (2, 2, 1, 0, 0),
    3: (7, 6, 3, 2, 0),
}


def _check_imbalance(i: int):
    if i not in IMBALANCES:
        raise ValueError(f"imbalance index must be in 0..4, found {i}")


# lowest Pell index used by each closed form is n - lag
_E_CLOSED_LAG = {0: 3, 1: 2, 2: 4, 3: 3, 4: 4}


def e_closed_evaluable(n: int, i: int) -> bool:
    """Whether the closed form for imbalance ``i`` only uses Pell numbers
    p_k with k >= -1 at order ``n``.

    """
    _check_imbalance(i)
    return n - _E_CLOSED_LAG[i] >= -1


def e_closed(n: int, i: int, strict: bool = True) -> int:
    """Closed form for the number of edges of imbalance ``i`` in the Pell
    graph of order ``n``.

    The closed forms are stated for n >= 4; with ``strict=False`` they are
    evaluated at every n where :func:`e_closed_evaluable` holds.

    """
    _check_imbalance(i)
    if strict and n < 4:
        raise ValueError(f"closed form for edges by imbalance needs n >= 4, found {n}")
    if not e_closed_evaluable(n, i):
        raise ValueError(
            f"closed form for edges of imbalance {i} needs n >= {_E_CLOSED_LAG[i] - 1}, found {n}"
        )

    what = f"e_closed(n={n}, i={i})"
    if i == 0:
        value = exact_div((n + 2) * pell(n - 2) + (n + 1) * pell(n - 3), 2, what)
    elif i == 1:
        value = n * pell(n - 2)
    elif i == 2:
        value = exact_div((5 * n - 3) * pell(n - 3) + (3 * n - 2) * pell(n - 4), 4, what)
    elif i == 3:
        value = (n - 1) * pell(n - 3)
    else:
        value = exact_div((n - 3) * pell(n - 3) + (n - 2) * pell(n - 4), 4, what)

    return nonnegative(value, what)


def _e_increment(n: int, i: int) -> int:
    if i == 0:
        return 2 * pell(n - 3)
    if i == 1:
        return pell(n - 2) + pell(n - 4)
    if i == 2:
        return pell(n - 3) + 2 * pell(n - 4)
    if i == 3:
        return pell(n - 3) + pell(n - 5)
    return pell(n - 4)


def e_recurrence(n: int, i: int, table: Optional[Mapping[tuple[int, int], int]] = None) -> int:
    """Number of edges of imbalance ``i`` from the recurrence
    e_n^i = 2 e_{n-1}^i + e_{n-2}^i + (term depending on i).

    ``table`` maps ``(n, i)`` to already known values; it must hold the
    values at n - 1 and n - 2 when given. Without a table the recurrence
    is unrolled from the initial values at n = 1, 2, 3.

    """
    _check_imbalance(i)
    if n < 1:
        raise ValueError(f"edges by imbalance are counted for n >= 1, found {n}")
    if n in E_INITIAL:
        return E_INITIAL[n][i]

    if table is None:
        return e_recurrence_table(n)[(n, i)]

    try:
        prev1, prev2 = table[(n - 1, i)], table[(n - 2, i)]
    except KeyError as err:
        raise ValueError(f"missing value e_{err.args[0][0]}^{i} for the recurrence at n={n}") from None

    return 2 * prev1 + prev2 + _e_increment(n, i)


def e_recurrence_table(max_n: int) -> dict[tuple[int, int], int]:
    """All recurrence values e_n^i for 1 <= n <= max_n."""
    table = {}
    for n in range(1, max_n + 1):
        for i in IMBALANCES:
            table[(n, i)] = e_recurrence(n, i, table) if n not in E_INITIAL else E_INITIAL[n][i]
    return table


def edge_count_closed(n: int) -> int:
    """Number of edges of the Pell graph of order ``n``: n p_n / 2."""
    if n < 0:
        raise ValueError(f"Pell graph order must be non-negative, found {n}")
    return exact_div(n * pell(n), 2, f"edge_count_closed(n={n})")


def e4_convolution(n: int) -> int:
    """Edges of imbalance 4 counted as words u 1221 w, i.e. the sum over
    k of p_k p_{n-4-k}.

    """
    if n < 4:
        raise ValueError(f"convolution form needs n >= 4, found {n}")
    return sum(pell(k) * pell(n - 4 - k) for k in range(n - 3))


def e4_convolution_displayed(n: int) -> int:
    """The variant sum over k = 0..n-4 of p_k p_{n-k}.

    It does not count the imbalance-4 edges (it gives 29 instead of 1 at
    n = 4); it is kept so reports can show both evaluations side by side.

    """
    if n < 4:
        raise ValueError(f"convolution form needs n >= 4, found {n}")
    return sum(pell(k) * pell(n - k) for k in range(n - 3))


def irr_closed(n: int) -> int:
    """Irregularity of the Pell graph of order ``n``: (n p_n + (n-3) p_{n-1}) / 2."""
    if n < 1:
        raise ValueError(f"closed form for the irregularity needs n >= 1, found {n}")
    what = f"irr_closed(n={n})"
    return nonnegative(exact_div(n * pell(n) + (n - 3) * pell(n - 1), 2, what), what)


IRR_INITIAL = {1: 0, 2: 4}


def irr_recurrence(n: int, table: Optional[Mapping[int, int]] = None) -> int:
    """Irregularity from irr_n = 2 irr_{n-1} + irr_{n-2} + 2 p_{n-1}
    with irr_1 = 0 and irr_2 = 4.

    """
    if n < 1:
        raise ValueError(f"irregularity recurrence starts at n = 1, found {n}")
    if n in IRR_INITIAL:
        return IRR_INITIAL[n]

    if table is None:
        table = dict(IRR_INITIAL)
        for k in range(3, n):
            table[k] = irr_recurrence(k, table)

    try:
        prev1, prev2 = table[n - 1], table[n - 2]
    except KeyError as err:
        raise ValueError(f"missing irregularity value at n={err.args[0]} for the recurrence") from None

    return 2 * prev1 + prev2 + 2 * pell(n - 1)


def sigma_closed(n: int) -> int:
    """σ-index of the Pell graph of order ``n``: (4n - 4) p_{n-1} - 2 p_{n-2}."""
    if n <= 1:
        raise ValueError(f"closed form for the sigma index needs n > 1, found {n}")
    what = f"sigma_closed(n={n})"
    return nonnegative((4 * n - 4) * pell(n - 1) - 2 * pell(n - 2), what)


@dataclass
class StructuralReport:
    """Edge categories of the canonical decomposition and the lemma violations found."""

    n: int
    counts: dict[str, int] = field(default_factory=dict)
    expected_counts: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _block_degrees(graph: Graph, blocks: np.ndarray) -> np.ndarray:
    rows = np.repeat(np.arange(graph.n_vertices), graph.degrees)
    same = blocks[rows] == blocks[graph.indices]
    return np.bincount(rows[same], minlength=graph.n_vertices)


def structural_imbalance_deltas(n: int, graph: Optional[Graph] = None) -> StructuralReport:
    """Check edge by edge how imbalances in the Pell graph of order ``n``
    relate to the blocks A, B and C of its canonical decomposition.

    - edges inside A or inside C keep the imbalance they have in the block;
    - edges inside B gain 1 exactly when one endpoint is in B11 and the
      other is not;
    - A-B edges have imbalance 1 for 01.../11... and 0 otherwise;
    - B-C edges have imbalance 3 for 111.../221... and 2 otherwise.

    """
    if n < 3:
        raise ValueError(f"structural imbalance lemmas need n >= 3, found {n}")
    if graph is None:
        graph = build_pell_graph(n)

    words = pell_words(n)
    dec = decompose(n)
    blocks = dec.block_codes()
    in_b11 = dec.mask(Part.B11)

    edges = graph.edges()
    imb = edge_imbalances(graph, edges)
    inner = _block_degrees(graph, blocks)
    inner_imb = np.abs(inner[edges[:, 0]] - inner[edges[:, 1]])

    report = StructuralReport(n)
    counts = dict.fromkeys(["A", "C", "B", "B+1", "AB0", "AB1", "BC2", "BC3"], 0)

    for (u, v), actual, within in zip(edges.tolist(), imb.tolist(), inner_imb.tolist()):
        bu, bv = blocks[u], blocks[v]
        if bu > bv:
            u, v, bu, bv = v, u, bv, bu

        if bu == bv == 0 or bu == bv == 2:
            category = "A" if bu == 0 else "C"
            expected = within
        elif bu == bv == 1:
            plus = bool(in_b11[u] != in_b11[v])
            category = "B+1" if plus else "B"
            expected = within + int(plus)
        elif (bu, bv) == (0, 1):
            expected = int(words[u, 0] == 0 and words[u, 1] == 1)
            category = f"AB{expected}"
        elif (bu, bv) == (1, 2):
            expected = 3 if tuple(words[u, :3]) == (1, 1, 1) else 2
            category = f"BC{expected}"
        else:
            report.violations.append(
                f"unexpected edge {graph.label(u)}-{graph.label(v)} between blocks {bu} and {bv}"
            )
            continue

        counts[category] += 1
        if actual != expected:
            report.violations.append(
                f"{category} edge {graph.label(u)}-{graph.label(v)}: "
                f"expected imbalance {expected}, found {actual}"
            )

    report.counts = counts
    report.expected_counts = {
        "AB1": pell(n - 2),
        "AB0": pell(n - 1) - pell(n - 2),
        "BC3": pell(n - 3),
        "BC2": pell(n - 3) + pell(n - 4),
        "B+1": pell(n - 2) + pell(n - 3),
    }
    for key, expected in report.expected_counts.items():
        if counts[key] != expected:
            report.violations.append(f"{key} edges: expected {expected}, found {counts[key]}")

    bc_irr = 2 * counts["BC2"] + 3 * counts["BC3"]
    if bc_irr != pell(n - 1):
        report.violations.append(f"B-C irregularity: expected {pell(n - 1)}, found {bc_irr}")

    logger.debug("structural deltas for n=%d: %s", n, counts)
    return report


def canonical_neighbour_rule(n: int, graph: Optional[Graph] = None) -> list[str]:
    """Check that every A vertex has exactly one neighbour in B and none in
    C, and every C vertex has exactly one neighbour outside C, lying in B11.

    """
    if n < 2:
        raise ValueError(f"canonical neighbour rule needs n >= 2, found {n}")
    if graph is None:
        graph = build_pell_graph(n)

    dec = decompose(n)
    blocks = dec.block_codes()
    in_b11 = dec.mask(Part.B11)
    rows = np.repeat(np.arange(graph.n_vertices), graph.degrees)
    nbr_blocks = blocks[graph.indices]

    def count(src_block, mask):
        sel = (blocks[rows] == src_block) & mask
        return np.bincount(rows[sel], minlength=graph.n_vertices)

    violations = []
    a_vertices = np.flatnonzero(blocks == 0)
    c_vertices = np.flatnonzero(blocks == 2)

    a_to_b = count(0, nbr_blocks == 1)[a_vertices]
    a_to_c = count(0, nbr_blocks == 2)[a_vertices]
    c_out = count(2, nbr_blocks != 2)[c_vertices]
    c_to_b11 = count(2, in_b11[graph.indices])[c_vertices]

    for v in a_vertices[(a_to_b != 1) | (a_to_c != 0)]:
        violations.append(f"A vertex {graph.label(v)} breaks the neighbour rule")
    for v in c_vertices[(c_out != 1) | (c_to_b11 != 1)]:
        violations.append(f"C vertex {graph.label(v)} breaks the neighbour rule")

    return violations


@dataclass(frozen=True, eq=False)
class PellExpansion:
    """The Pell graph of order ``n`` rebuilt as an expansion of the doubled
    Pell graph of order ``n - 1``.

    ``to_pell[h]`` is the canonical index of the Pell string that vertex
    ``h`` of ``expansion.graph`` stands for.

    """

    n: int
    spec: ExpansionSpec
    expansion: Expansion
    to_pell: np.ndarray
    matches: bool


def pell_graph_as_expansion(n: int) -> PellExpansion:
    """Expand the doubled Pell graph of order ``n - 1`` (the blocks A and B)
    with V1 = everything and V2 = the copy of B11, which adds the block C.

    """
    if n < 2:
        raise ValueError(f"Pell graph expansion needs n >= 2, found {n}")

    previous = pell_words(n - 1)
    doubled = expand(doubling_spec(build_pell_graph(n - 1)))
    host = doubled.graph

    b11 = np.flatnonzero((doubled.side == 2) & (previous[doubled.origin, 0] == 1))
    spec = ExpansionSpec.create(host, np.arange(host.n_vertices), b11)
    result = expand(spec)

    tail = previous[doubled.origin[result.origin]]
    first = np.where(result.side == 2, 2, doubled.side[result.origin] - 1).astype(np.uint8)
    words = np.column_stack([first, tail]).astype(np.uint8)
    words[result.side == 2, 1] = 2

    keys = word_keys(pell_words(n), 3)
    to_pell = np.searchsorted(keys, word_keys(words, 3))

    target = build_pell_graph(n)
    matches = bool(
        np.array_equal(np.sort(to_pell), np.arange(target.n_vertices))
        and result.graph.relabel(to_pell).same_adjacency(target)
    )
    return PellExpansion(n, spec, result, to_pell, matches)


def irr_via_expansion(n: int) -> int:
    """Irregularity of the Pell graph of order ``n`` computed on the doubled
    Pell graph of order n - 1 from the spec of :func:`pell_graph_as_expansion`.

    """
    return irr_expansion_host(pell_graph_as_expansion(n).spec)


__all__ = [
    "E_INITIAL",
    "IRR_INITIAL",
    "Decomposition",
    "EdgeClass",
    "EdgeKind",
    "FormulaError",
    "Part",
    "PellExpansion",
    "StructuralReport",
    "canonical_neighbour_rule",
    "classify_edge",
    "decompose",
    "e4_convolution",
    "e4_convolution_displayed",
    "e_closed",
    "e_closed_evaluable",
    "e_recurrence",
    "e_recurrence_table",
    "edge_count_closed",
    "irr_closed",
    "irr_recurrence",
    "irr_via_expansion",
    "pell_graph_as_expansion",
    "predicted_imbalances",
    "sigma_closed",
    "structural_imbalance_deltas",
]
