"""Command line interface.

Data goes to standard output, logs and summaries to standard error. Exit
code 0 means every binding comparison passed, 1 that some formula was
violated and 2 a usage error.

"""
import json
import logging
import os
import sys

import click

from .graphs import build_pell_graph
from .irregularity import edge_imbalances, histogram
from .options import OPTIONS, set_options
from .pellstruct import predicted_imbalances
from .verify import CHECKS, run_checks
from .words import pell_words
from .xr_accessor import STATS, histogram_table, stat_table

logger = logging.getLogger(__name__)

EXIT_VIOLATION = 1


def _configure_logging(verbose: int):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _check_order(n: int, param: str):
    limit = OPTIONS["pell_build_limit"]
    if n > limit:
        raise click.BadParameter(f"{n} exceeds the build limit {limit}", param_hint=param)


def _emit_table(ds, fmt: str, value_var: str = "value"):
    tables = ds._tables(value_var=value_var)
    click.echo(tables.to_csv() if fmt == "csv" else tables.to_ndjson(), nl=False)


@click.group()
@click.option(
    "--build-limit",
    type=click.IntRange(min=1),
    default=None,
    envvar="PELLGRAPHS_BUILD_LIMIT",
    show_envvar=True,
    help="Largest Pell graph order that may be built.",
)
@click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    envvar="PELLGRAPHS_THREADS",
    show_envvar=True,
    help="Worker threads (default: available CPUs).",
)
@click.option("-v", "--verbose", count=True, help="Increase log verbosity (repeatable).")
@click.pass_context
def main(ctx: click.Context, build_limit, threads, verbose):
    """Pell graphs: construction, irregularity and formula verification."""
    _configure_logging(verbose)

    if build_limit is not None:
        # restored when the command context closes
        options = set_options(pell_build_limit=build_limit)
        ctx.call_on_close(lambda: options.__exit__(None, None, None))

    ctx.obj = {"threads": threads or os.cpu_count() or 1}


@main.command()
@click.option("--max-n", type=click.IntRange(min=1), required=True, help="Largest order checked.")
@click.option(
    "--checks",
    default=",".join(CHECKS),
    show_default=True,
    help="Comma separated list of checks to run.",
)
@click.option(
    "--seed",
    type=int,
    default=0,
    envvar="PELLGRAPHS_SEED",
    show_envvar=True,
    help="Seed of the random expansion sequences.",
)
@click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    help="Worker threads, overrides the group option.",
)
@click.pass_obj
def verify(obj, max_n, checks, seed, threads):
    """Compare brute-force counts on Pell graphs with the formulas.

    Emits one JSON object per comparison.
    """
    names = [name.strip() for name in checks.split(",") if name.strip()]
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise click.BadParameter(
            f"unknown check(s) {', '.join(unknown)}; valid checks: {', '.join(CHECKS)}",
            param_hint="--checks",
        )
    _check_order(max_n, "--max-n")

    report = run_checks(max_n, names, threads=threads or obj["threads"], seed=seed)

    for line in report.ndjson():
        click.echo(line)
    click.echo(report.summary(), err=True)

    if not report.ok:
        sys.exit(EXIT_VIOLATION)


@main.command()
@click.option("--stat", type=click.Choice(STATS), required=True, help="Statistic to tabulate.")
@click.option("--max-n", type=click.IntRange(min=1), required=True, help="Largest order.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def table(stat, max_n, fmt):
    """Tabulate closed-form values (pure arithmetic, no graph is built)."""
    limit = OPTIONS["table_formula_limit"]
    if max_n > limit:
        raise click.BadParameter(f"{max_n} exceeds the formula table limit {limit}", param_hint="--max-n")

    _emit_table(stat_table(stat, max_n), fmt)


@main.command()
@click.option("--n", "n", type=click.IntRange(min=0), required=True, help="Pell graph order.")
@click.option(
    "--emit", type=click.Choice(["edges", "adjacency"]), default="edges", show_default=True
)
@click.option(
    "--labels/--indices",
    default=False,
    help="Print vertices as Pell strings or as canonical indices.",
)
def graph(n, emit, labels):
    """Export the Pell graph of order n."""
    _check_order(n, "--n")
    pell_graph = build_pell_graph(n)

    def name(v):
        return pell_graph.label(v) if labels else str(v)

    if emit == "edges":
        for u, v in pell_graph.edges().tolist():
            click.echo(f"{name(u)} {name(v)}")
    else:
        for v in range(pell_graph.n_vertices):
            nbrs = " ".join(name(w) for w in pell_graph.neighbors(v).tolist())
            click.echo(f"{name(v)}: {nbrs}".rstrip())


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Pell graph order.")
def classify(n):
    """Classify every edge and compare predicted with measured imbalance.

    Columns: u v kind predicted measured.
    """
    _check_order(n, "--n")
    pell_graph = build_pell_graph(n)
    swap, predicted = predicted_imbalances(pell_graph, pell_words(n))
    measured = edge_imbalances(pell_graph)

    mismatches = 0
    for (u, v), is_swap, pred, meas in zip(
        pell_graph.edges().tolist(), swap.tolist(), predicted.tolist(), measured.tolist()
    ):
        kind = "swap" if is_swap else "flip"
        click.echo(f"{pell_graph.label(u)} {pell_graph.label(v)} {kind} {pred} {meas}")
        if pred != meas:
            mismatches += 1
            logger.error("edge %s-%s: predicted %d, measured %d", u, v, pred, meas)

    if mismatches:
        click.echo(f"{mismatches} edges with mismatching imbalance", err=True)
        sys.exit(EXIT_VIOLATION)


@main.command("histogram")
@click.option("--n", "n", type=click.IntRange(min=0), required=True, help="Pell graph order.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def histogram_cmd(n, fmt):
    """Number of edges of the Pell graph of order n by imbalance."""
    _check_order(n, "--n")
    hist = histogram(build_pell_graph(n))

    if fmt == "json":
        click.echo(json.dumps({"n": n, "counts": hist.to_json()}))
    else:
        _emit_table(histogram_table(n, hist), fmt, value_var="count")

