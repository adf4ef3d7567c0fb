"""Brute-force verification of the counting formulas and of the expansion
machinery, collected into a :class:`VerificationReport`.

"""
import json
import logging
import threading
import time
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .expansion import (
    ExpansionSpec,
    doubling_spec,
    example_expansion_spec,
    expand,
    irr_doubled,
    irr_expansion_host,
    irr_expansion_rhs,
    irr_peripheral_rhs,
    iter_random_expansions,
    recognize_partial_cube,
)
from .graphs import (
    BuildLimitExceeded,
    Graph,
    build_fibonacci_cube,
    build_hypercube,
    build_pell_graph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    path_graph,
)
from .irregularity import edge_imbalances, histogram, irr, sigma
from .options import OPTIONS
from .pellstruct import (
    E_INITIAL,
    IMBALANCES,
    canonical_neighbour_rule,
    e4_convolution,
    e4_convolution_displayed,
    e_closed,
    e_closed_evaluable,
    e_recurrence_table,
    edge_count_closed,
    irr_closed,
    irr_recurrence,
    pell_graph_as_expansion,
    predicted_imbalances,
    sigma_closed,
    structural_imbalance_deltas,
)
from .seq import FormulaError
from .words import pell_words

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReportEntry:
    """One compared quantity.

    Informational entries are reported but do not count towards the
    overall result.

    """

    check: str
    n: Optional[int]
    i: Optional[int]
    expected: Optional[int]
    actual: int
    informational: bool = False
    # set when the expected value could not be evaluated
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.expected == self.actual

    def to_json(self) -> dict[str, Any]:
        data = {
            "check": self.check,
            "n": self.n,
            "i": self.i,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.passed,
            "informational": self.informational,
        }
        if self.error is not None:
            data["error"] = self.error
        return data


def compare(
    check: str,
    n: Optional[int],
    i: Optional[int],
    formula: Callable[[], int],
    actual: int,
    informational: bool = False,
) -> ReportEntry:
    """Entry for ``formula()`` against ``actual``; a :class:`FormulaError`
    (inexact division, negative value) gives a failed entry.

    """
    try:
        expected = formula()
    except FormulaError as exc:
        logger.error("%s n=%s i=%s: %s", check, n, i, exc)
        return ReportEntry(check, n, i, None, actual, informational, error=str(exc))
    return ReportEntry(check, n, i, expected, actual, informational)


@dataclass
class VerificationReport:
    """Entries grouped by the check that produced them, with wall times."""

    sections: dict[str, list[ReportEntry]] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def add(self, check: str, entries: list[ReportEntry], seconds: float):
        self.sections[check] = entries
        self.timings[check] = seconds

    @property
    def entries(self) -> list[ReportEntry]:
        return [entry for entries in self.sections.values() for entry in entries]

    @property
    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if not e.passed and not e.informational]

    @property
    def ok(self) -> bool:
        return not self.failures

    def counts(self) -> dict[str, int]:
        binding = [e for e in self.entries if not e.informational]
        passed = sum(e.passed for e in binding)
        return {
            "passed": passed,
            "failed": len(binding) - passed,
            "informational": len(self.entries) - len(binding),
        }

    def ndjson(self) -> Iterator[str]:
        for entry in self.entries:
            yield json.dumps(entry.to_json())

    def summary(self) -> str:
        """Human readable summary, including the wall time spent per check."""
        lines = []
        for name, entries in self.sections.items():
            seconds = self.timings[name]
            failed = sum(not e.passed and not e.informational for e in entries)
            lines.append(f"{name:<16} {len(entries):>6} entries {failed:>4} failed {seconds:8.3f}s")

        counts = self.counts()
        status = "PASS" if self.ok else "FAIL"
        lines.append(
            f"{status}: {counts['passed']} passed, {counts['failed']} failed, "
            f"{counts['informational']} informational"
        )
        return "\n".join(lines)


class GraphCache:
    """Pell graphs shared by the checks of one verification run."""

    def __init__(self):
        self._graphs: dict[int, Graph] = {}
        self._lock = threading.Lock()

    def pell(self, n: int) -> Graph:
        with self._lock:
            graph = self._graphs.get(n)
        if graph is None:
            graph = build_pell_graph(n)
            with self._lock:
                graph = self._graphs.setdefault(n, graph)
        return graph


class Check:
    """Base class for verification checks.

    Subclasses set ``name`` and either implement ``.run_n()``, called for
    every ``n`` in ``min_n .. min(max_n, cap)``, or override ``.run()``.

    """

    name: Optional[str] = None
    min_n: int = 1
    cap: Optional[int] = None

    def __init__(self, max_n: int, graphs: GraphCache, seed: int = 0):
        self.max_n = max_n
        self.graphs = graphs
        self.seed = seed

    @property
    def orders(self) -> range:
        top = self.max_n if self.cap is None else min(self.max_n, self.cap)
        return range(self.min_n, top + 1)

    def run_n(self, n: int) -> list[ReportEntry]:
        raise NotImplementedError()

    def run(self, executor: Optional[ThreadPoolExecutor] = None) -> list[ReportEntry]:
        if executor is None:
            results = map(self.run_n, self.orders)
        else:
            results = executor.map(self.run_n, self.orders)
        return [entry for entries in results for entry in entries]


class HistogramCheck(Check):
    """Brute-force edge counts by imbalance against the initial values and
    the recurrence.

    """

    name = "histogram"

    def run_n(self, n):
        hist = histogram(self.graphs.pell(n))
        table = e_recurrence_table(n)
        return [ReportEntry(self.name, n, i, table[(n, i)], hist[i]) for i in IMBALANCES]


class ClosedFormCheck(Check):
    """Brute-force edge counts by imbalance against the closed forms.

    Below n = 4 every closed form that only uses p_k with k >= -1 is
    evaluated as an informational entry.

    """

    name = "closed-form"

    def run_n(self, n):
        hist = histogram(self.graphs.pell(n))
        return [
            compare(self.name, n, i, lambda i=i: e_closed(n, i, strict=False), hist[i], n < 4)
            for i in IMBALANCES
            if e_closed_evaluable(n, i)
        ]


class EdgeCountCheck(Check):
    name = "edges"

    def run_n(self, n):
        graph = self.graphs.pell(n)
        if n in E_INITIAL:
            by_imbalance = sum(E_INITIAL[n])
        else:
            table = e_recurrence_table(n)
            by_imbalance = sum(table[(n, i)] for i in IMBALANCES)
        return [
            compare(self.name, n, None, lambda: edge_count_closed(n), graph.n_edges),
            compare("edges-histogram", n, None, lambda: edge_count_closed(n), by_imbalance),
        ]


class IrregularityCheck(Check):
    name = "irr"

    def run_n(self, n):
        actual = irr(self.graphs.pell(n))
        return [
            compare(self.name, n, None, lambda: irr_closed(n), actual),
            compare("irr-recurrence", n, None, lambda: irr_recurrence(n), actual),
        ]


class SigmaCheck(Check):
    name = "sigma"
    min_n = 2

    def run_n(self, n):
        return [compare(self.name, n, None, lambda: sigma_closed(n), sigma(self.graphs.pell(n)))]


class ConvolutionCheck(Check):
    """Edges of imbalance 4 against both convolution sums; only the one
    over p_k p_{n-4-k} is binding.

    """

    name = "convolution"
    min_n = 4

    def run_n(self, n):
        actual = histogram(self.graphs.pell(n))[4]
        return [
            compare(self.name, n, 4, lambda: e4_convolution(n), actual),
            compare(
                "convolution-displayed", n, 4, lambda: e4_convolution_displayed(n), actual, True
            ),
        ]


class ClassifyCheck(Check):
    """Predicted imbalance of every edge from its rewrite site against the
    measured one, plus the per-kind bounds.

    """

    name = "classify"
    cap = 10

    def run_n(self, n):
        graph = self.graphs.pell(n)
        swap, predicted = predicted_imbalances(graph, pell_words(n))
        measured = edge_imbalances(graph)

        out_of_bounds = (
            np.count_nonzero(~swap & (measured > 2))
            + np.count_nonzero(swap & ((measured < 2) | (measured > 4)))
        )
        return [
            ReportEntry(self.name, n, None, graph.n_edges, int(np.count_nonzero(predicted == measured))),
            ReportEntry("classify-bounds", n, None, 0, int(out_of_bounds)),
        ]


class StructureCheck(Check):
    """Imbalance changes across the canonical decomposition, and the
    neighbour rule for the blocks A and C.

    """

    name = "structure"
    min_n = 2
    cap = 10

    def run_n(self, n):
        graph = self.graphs.pell(n)
        entries = [ReportEntry("neighbour-rule", n, None, 0, len(canonical_neighbour_rule(n, graph)))]
        if n >= 3:
            report = structural_imbalance_deltas(n, graph)
            for violation in report.violations[:10]:
                logger.warning("structure n=%d: %s", n, violation)
            entries.append(ReportEntry(self.name, n, None, 0, len(report.violations)))
        return entries


class PellExpansionCheck(Check):
    """The Pell graph of order n rebuilt by expanding the doubled Pell graph
    of order n - 1; the closed peripheral expression is informational.

    """

    name = "pell-expansion"
    min_n = 2
    cap = 9

    def run_n(self, n):
        result = pell_graph_as_expansion(n)
        expected = irr(self.graphs.pell(n))
        return [
            ReportEntry(self.name, n, None, expected, irr(result.expansion.graph)),
            ReportEntry("pell-expansion-rhs", n, None, expected, irr_expansion_host(result.spec)),
            ReportEntry(
                "pell-expansion-peripheral",
                n,
                None,
                irr_peripheral_rhs(result.spec),
                expected,
                informational=True,
            ),
            ReportEntry("pell-expansion-adjacency", n, None, 1, int(result.matches)),
        ]


class ExpansionCheck(Check):
    """Irregularity of expansions against the host-side evaluator, on seeded
    random expansion sequences, the seven-vertex example and doubled graphs.

    The closed expressions (general and peripheral) overcount when a
    vertex outside V1 ∩ V2 has a larger degree in its copy than its
    neighbour inside; they are reported as informational entries.

    """

    name = "expansion"
    n_seeds = 25
    max_steps = 8

    def _entries(self, spec: ExpansionSpec, actual: int, check: str) -> list[ReportEntry]:
        host_size = spec.host.n_vertices
        entries = [
            ReportEntry(check, host_size, None, irr_expansion_host(spec), actual),
            ReportEntry(
                f"{check}-printed", host_size, None, irr_expansion_rhs(spec), actual, informational=True
            ),
        ]
        if spec.is_peripheral:
            entries.append(
                ReportEntry(
                    f"{check}-peripheral",
                    host_size,
                    None,
                    irr_peripheral_rhs(spec),
                    actual,
                    informational=True,
                )
            )
        return entries

    def _random_entries(self, seed: int) -> list[ReportEntry]:
        entries = []
        steps = min(self.max_steps, self.max_n)
        for expansion in iter_random_expansions(steps, seed=self.seed * 1000 + seed):
            entries.extend(self._entries(expansion.spec, irr(expansion.graph), self.name))
        return entries

    def _doubling_entries(self) -> list[ReportEntry]:
        families = (
            ("Q", build_hypercube, 5),
            ("Gamma", build_fibonacci_cube, 8),
            ("Pi", build_pell_graph, 7),
        )
        entries = []
        for family, build, cap in families:
            for n in range(1, min(cap, self.max_n) + 1):
                graph = build(n)
                actual = irr(expand(doubling_spec(graph)).graph)
                entries.append(ReportEntry(f"expansion-doubling:{family}", n, None, irr_doubled(graph), actual))
        return entries

    def run(self, executor=None):
        seeds = range(self.n_seeds)
        if executor is None:
            results = list(map(self._random_entries, seeds))
        else:
            results = list(executor.map(self._random_entries, seeds))
        entries = [entry for batch in results for entry in batch]

        example = example_expansion_spec()
        entries.extend(self._entries(example, irr(expand(example).graph), "expansion-example"))
        entries.extend(self._doubling_entries())
        return entries


def _recognition_cases(max_n: int) -> Iterator[tuple[str, int, Graph, bool]]:
    for n in range(1, min(6, max_n) + 1):
        yield "Q", n, build_hypercube(n), True
    for n in range(1, min(9, max_n) + 1):
        yield "Gamma", n, build_fibonacci_cube(n), True
    for n in range(1, min(8, max_n) + 1):
        yield "Pi", n, build_pell_graph(n), True
    for n in (4, 6, 8):
        yield "cycle", n, cycle_graph(n), True
    yield "path", 5, path_graph(5), True
    yield "star", 5, complete_bipartite_graph(1, 4), True
    for n in (5, 7):
        yield "cycle", n, cycle_graph(n), False
    yield "complete", 4, complete_graph(4), False
    yield "complete-bipartite-2-3", 5, complete_bipartite_graph(2, 3), False


class RecognitionCheck(Check):
    """Partial cube recognition on graphs with a known answer, with the
    contraction certificate replayed for accepted graphs.

    """

    name = "recognition"

    def _case(self, case: tuple[str, int, Graph, bool]) -> list[ReportEntry]:
        family, n, graph, expected = case
        certificate = recognize_partial_cube(graph)
        entries = [ReportEntry(f"{self.name}:{family}", n, None, int(expected), int(certificate.ok))]
        if certificate.ok:
            entries.append(ReportEntry(f"{self.name}-replay:{family}", n, None, 1, int(certificate.replay())))
        return entries

    def run(self, executor=None):
        cases = list(_recognition_cases(self.max_n))
        if executor is None:
            results = map(self._case, cases)
        else:
            results = executor.map(self._case, cases)
        return [entry for entries in results for entry in entries]


CHECKS: dict[str, type[Check]] = {
    cls.name: cls
    for cls in (
        HistogramCheck,
        ClosedFormCheck,
        EdgeCountCheck,
        IrregularityCheck,
        SigmaCheck,
        ConvolutionCheck,
        ClassifyCheck,
        StructureCheck,
        ExpansionCheck,
        RecognitionCheck,
        PellExpansionCheck,
    )
}


def run_checks(
    max_n: int,
    checks: Optional[Iterable[str]] = None,
    threads: Optional[int] = None,
    seed: int = 0,
) -> VerificationReport:
    """Run the selected checks (all by default) for orders up to ``max_n``.

    Entries come out in check order and, within a check, in order of ``n``
    whatever the number of threads.

    """
    if max_n < 1:
        raise ValueError(f"max_n must be at least 1, found {max_n}")
    names = list(CHECKS) if checks is None else list(checks)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s) {unknown}, valid checks are {list(CHECKS)}")

    limit = OPTIONS["pell_build_limit"]
    if max_n > limit:
        raise BuildLimitExceeded(f"max_n={max_n} exceeds the Pell graph build limit {limit}")

    graphs = GraphCache()
    report = VerificationReport()
    executor = ThreadPoolExecutor(max_workers=threads) if threads != 1 else None

    try:
        for name in names:
            check = CHECKS[name](max_n, graphs, seed=seed)
            start = time.perf_counter()
            entries = check.run(executor)
            report.add(name, entries, time.perf_counter() - start)
            logger.info("check %s: %d entries in %.3fs", name, len(entries), report.timings[name])
    finally:
        if executor is not None:
            executor.shutdown()

    return report
