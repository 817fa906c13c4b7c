"""Command-line interface for building, verifying and measuring IDSTs in EA_n."""

import json
import sys
from collections.abc import Sequence
from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as get_version
from pathlib import Path
from typing import Any, NoReturn

import click

from godan_idst.acceptance import CRITERIA, run_acceptance
from godan_idst.builder import build_idsts
from godan_idst.config import settings
from godan_idst.core.exceptions import (
    ConstructionError,
    GodanError,
    GraphSizeError,
    InternalConsistencyError,
    PermutationError,
)
from godan_idst.core.graphs import CayleyGraph, build_alt_network, build_godan
from godan_idst.core.oracle import (
    descent_check,
    kappa_k_exact,
    kappa_S_exact,
    upper_bound_min_degree_rule,
    whitney_kappa,
)
from godan_idst.core.permutations import Permutation
from godan_idst.core.verify import structural_suite, verify_idst
from godan_idst.dto.models import (
    KappaResultSchema,
    OutputFormat,
    PackingResultSchema,
    RunConfig,
    SteinerTreeSetSchema,
    VerificationReportSchema,
)
from godan_idst.export import graph_to_dot, graph_to_json, tree_set_to_dot
from godan_idst.reporting import build_tree_set_report, summarize_sweep
from godan_idst.sweeps.scheduler import rows_to_csv, run_sweep
from godan_idst.sweeps.store import create_store
from godan_idst.sweeps.util import exhaustive_subsets, json_dumps, resolve_jobs, sampled_subsets
from godan_idst.utils.logging import get_logger, set_level
from godan_idst.utils.telemetry import telemetry

EXIT_FAILURE = 1
EXHAUSTIVE_SWEEP_MAX_N = 4
SUITE_MAX_N = 6
GRAPHS = {"ea": build_godan, "an": build_alt_network}


def _get_version() -> str:
    """Get the package version, falling back to VERSION.txt if not installed."""
    try:
        return get_version("godan-idst")
    except PackageNotFoundError:
        version_file = Path(__file__).parent.parent.parent / "VERSION.txt"
        if version_file.exists():
            return version_file.read_text().strip()
        return "0.0.0"


logger = get_logger(__name__)

n_option = click.option(
    "--n", "n", type=click.IntRange(min=3), required=True, help="Order of the graph."
)
seed_option = click.option(
    "--seed", type=int, default=None, help="Sampling seed (default SWEEP.SEED)."
)
out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Output file; relative paths land in OUTPUT_DIR. Default: stdout.",
)
jobs_option = click.option(
    "--jobs", type=click.IntRange(min=0), default=None, help="Worker processes (0: all cores)."
)
graph_option = click.option(
    "--graph", "kind", type=click.Choice(sorted(GRAPHS)), default="ea", show_default=True
)


def _log_level(verbose: int, quiet: bool) -> str:
    if quiet:
        return "ERROR"
    if verbose >= 1:
        return "DEBUG"
    return "INFO"


def _emit(text: str, out: Path | None) -> None:
    """Write an artifact to ``out`` (under OUTPUT_DIR when relative) or stdout."""
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    target = out if out.is_absolute() else Path(settings.OUTPUT_DIR) / out
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise click.FileError(str(target), hint=str(exc)) from exc
    click.echo(f"Wrote {target}", err=True)


def _graph(kind: str, n: int) -> CayleyGraph:
    try:
        return GRAPHS[kind](n)
    except GraphSizeError as exc:
        raise click.BadParameter(str(exc), param_hint="--n") from exc


def _terminals(text: str, n: int) -> list[Permutation]:
    """``--s`` accepts ``1234,2341,...``; for n >= 10 the items are separated by ``;``."""
    items = text.split(";") if ";" in text else text.split(",")
    try:
        terminals = [Permutation.parse(item.strip(), n) for item in items]
    except PermutationError as exc:
        raise click.BadParameter(str(exc), param_hint="--s") from exc
    if len(set(terminals)) != len(terminals):
        raise click.BadParameter("S repeats a vertex", param_hint="--s")
    return terminals


def _fail(message: str) -> NoReturn:
    logger.error("command failed", error=message)
    click.echo(f"Error: {message}", err=True)
    sys.exit(EXIT_FAILURE)


@click.group()
@click.option("--env", default="default", help="Dynaconf environment (e.g. development).")
@click.option("--verbose", "-v", count=True, help="Increase verbosity.")
@click.option("--quiet", "-q", is_flag=True, help="Only log errors.")
@click.option(
    "--telemetry/--no-telemetry",
    "telemetry_flag",
    default=None,
    help="Enable or disable OpenTelemetry (default USE_OPENTELEMETRY).",
)
@click.version_option(version=_get_version())
def main(env: str, verbose: int, quiet: bool, telemetry_flag: bool | None) -> None:
    """Internally disjoint Steiner trees in godan graphs EA_n."""
    settings.setenv(env)
    level = _log_level(verbose, quiet)
    settings.update({"LOG_LEVEL": level})
    set_level(level)
    if telemetry_flag is not None:
        settings.set("USE_OPENTELEMETRY", telemetry_flag)
    if telemetry_flag is False:
        telemetry.disable()
    else:
        telemetry.setup()


@main.command()
@n_option
@graph_option
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "dot"]),
    default="json",
    show_default=True,
)
@out_option
def gen(n: int, kind: str, fmt: str, out: Path | None) -> None:
    """Dump EA_n (or AN_n) as JSON or DOT."""
    graph = _graph(kind, n)
    text = graph_to_dot(graph) if fmt == OutputFormat.DOT else graph_to_json(graph) + "\n"
    _emit(text, out)


@main.command()
@n_option
@click.option(
    "--s", "terminals_text", required=True, help="Four vertices, e.g. 1234,2341,3412,4123."
)
@click.option("--m", "position", type=int, default=None, help="Cluster position (default n).")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "dot"]),
    default="json",
    show_default=True,
)
@click.option(
    "--fallback-search/--no-fallback-search",
    default=None,
    help="Replace a failed construction by exact packing (default CLI.FALLBACK_SEARCH).",
)
@out_option
def idst(
    n: int,
    terminals_text: str,
    position: int | None,
    fmt: str,
    fallback_search: bool | None,
    out: Path | None,
) -> None:
    """Build and verify n-1 internally disjoint S-trees for a 4-set S."""
    graph = _graph("ea", n)
    terminals = _terminals(terminals_text, n)
    fallback = settings.CLI.FALLBACK_SEARCH if fallback_search is None else fallback_search
    config = RunConfig(
        n=n,
        command="idst",
        fmt=fmt,
        out=None if out is None else str(out),
        fallback_search=fallback,
        position=position,
    )
    try:
        result = build_idsts(graph, terminals, m=position, fallback=fallback)
    except (ConstructionError, InternalConsistencyError) as exc:
        _fail(str(exc))
    except GodanError as exc:
        raise click.UsageError(str(exc)) from exc
    report = verify_idst(
        graph, result.trees, result.terminals, expected=n - 1, subject=str(result.case)
    )
    if fmt == OutputFormat.DOT:
        _emit(tree_set_to_dot(result, position=position), out)
    else:
        payload = build_tree_set_report(result, report, config=config)
        _emit(json.dumps(payload, indent=2) + "\n", out)
    click.echo(f"{len(result)} trees, {result.case}, verified={report.overall}", err=True)
    if not report.overall:
        _fail(f"verification failed: {report.failures()[0].detail}")


@main.command()
@n_option
@click.option("--exhaustive", is_flag=True, help="Every 4-subset (n <= 4).")
@click.option(
    "--sample", type=click.IntRange(min=1), default=None, help="Number of sampled 4-subsets."
)
@seed_option
@click.option("--m", "position", type=int, default=None, help="Cluster position (default n).")
@click.option("--fallback-search/--no-fallback-search", default=None)
@click.option("--timings", is_flag=True, help="Measure the millis column.")
@jobs_option
@click.option(
    "--db", type=click.Path(dir_okay=False), default=None, help="DuckDB file for the rows."
)
@click.option(
    "--summary",
    "summary_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the summary JSON here instead of stderr.",
)
@out_option
def sweep(  # noqa: PLR0913
    n: int,
    exhaustive: bool,
    sample: int | None,
    seed: int | None,
    position: int | None,
    fallback_search: bool | None,
    timings: bool,
    jobs: int | None,
    db: str | None,
    summary_path: Path | None,
    out: Path | None,
) -> None:
    """Build IDSTs for many 4-subsets; CSV rows plus a summary with the case histogram."""
    if exhaustive == (sample is not None):
        raise click.UsageError("choose exactly one of --exhaustive and --sample N")
    if exhaustive and n > EXHAUSTIVE_SWEEP_MAX_N:
        raise click.UsageError(f"--exhaustive needs n <= {EXHAUSTIVE_SWEEP_MAX_N}")
    graph = _graph("ea", n)
    seed = settings.SWEEP.SEED if seed is None else seed
    fallback = settings.CLI.FALLBACK_SEARCH if fallback_search is None else fallback_search
    config = RunConfig(
        n=n,
        command="sweep",
        subsets="exhaustive" if exhaustive else "sample",
        sample=sample,
        seed=seed,
        out=None if out is None else str(out),
        fmt=OutputFormat.CSV,
        jobs=resolve_jobs(jobs),
        fallback_search=fallback,
        position=position,
        timings=timings,
    )
    subsets = exhaustive_subsets(graph) if exhaustive else sampled_subsets(graph, sample or 0, seed)
    rows = list(run_sweep(n, subsets, m=position, fallback=fallback, timings=timings, jobs=jobs))
    store = create_store(db)
    run_id = f"n{n}-{config.subsets}-{sample or 'all'}-seed{seed}"
    try:
        store.add_rows(run_id, rows)
        histogram = store.histogram(run_id)
    finally:
        store.close()
    _emit(rows_to_csv(rows), out)
    summary = summarize_sweep(rows, config=config)
    summary["histogram"] = histogram
    text = json.dumps(summary, indent=2) + "\n"
    if summary_path is not None:
        _emit(text, summary_path)
    else:
        click.echo(text, err=True, nl=False)
    if summary["failures"]:
        _fail(f"{len(summary['failures'])} subsets failed")


@main.command()
@n_option
@graph_option
@click.option(
    "--measure",
    type=click.Choice(["kappa", "whitney", "bound", "descent"]),
    default="kappa",
    show_default=True,
)
@click.option("--k", "k", type=click.IntRange(min=2), default=4, show_default=True)
@click.option("--s", "terminals_text", default=None, help="Compute kappa(S) for this set instead.")
@click.option("--exhaustive/--sampled", default=True, show_default=True)
@click.option("--sample", type=click.IntRange(min=1), default=None, help="Sampled k-subsets.")
@seed_option
@out_option
def oracle(  # noqa: PLR0913
    n: int,
    kind: str,
    measure: str,
    k: int,
    terminals_text: str | None,
    exhaustive: bool,
    sample: int | None,
    seed: int | None,
    out: Path | None,
) -> None:
    """Exact generalized connectivity, Whitney kappa, the degree bound or the descent check."""
    graph = _graph(kind, n)
    seed = settings.SWEEP.SEED if seed is None else seed
    if sample is not None:
        exhaustive = False
    payload: dict[str, Any]
    try:
        if terminals_text is not None:
            packing = kappa_S_exact(graph, _terminals(terminals_text, n))
            payload = {**PackingResultSchema().dump(packing), "seed": seed}
            value = packing.max_t
        elif measure == "kappa":
            kappa = kappa_k_exact(graph, k, exhaustive=exhaustive, sample=sample, seed=seed)
            payload = KappaResultSchema().dump(kappa)
            value = kappa.value
        elif measure == "whitney":
            value = whitney_kappa(graph)
            payload = {"graph": f"{graph.name}_{n}", "whitney_kappa": value}
        elif measure == "bound":
            bound = upper_bound_min_degree_rule(graph, k)
            payload = {"graph": f"{graph.name}_{n}", "k": k, "bound": bound}
            value = bound
        else:
            check = descent_check(graph, k, exhaustive=exhaustive, sample=sample, seed=seed)
            payload = {
                "graph": check.graph,
                "k": k,
                "r": check.r,
                "kappa_k": check.kappa_k,
                "kappa_k_minus_1": check.kappa_k_minus_1,
                "holds": check.holds,
            }
            value = check.kappa_k_minus_1
    except GodanError as exc:
        raise click.UsageError(str(exc)) from exc
    _emit(json_dumps(payload) + "\n", out)
    click.echo(f"{measure}: {value}", err=True)


@main.command()
@click.option(
    "--criterion",
    "criteria",
    multiple=True,
    type=click.Choice(list(CRITERIA)),
    help="Run only these criteria (repeatable).",
)
@seed_option
@jobs_option
@out_option
def accept(criteria: Sequence[str], seed: int | None, jobs: int | None, out: Path | None) -> None:
    """Run the acceptance criteria; exit 0 iff all pass."""
    report = run_acceptance(criteria or None, seed=seed, jobs=jobs)
    _emit(VerificationReportSchema().dumps(report, indent=2) + "\n", out)
    if not report.overall:
        _fail(f"{len(report.failures())} acceptance checks failed")
    click.echo("all acceptance checks passed", err=True)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def verify(path: Path) -> None:
    """Load a tree-set JSON (or an idst report) and verify it again."""
    data = json.loads(path.read_text(encoding="utf-8"))
    try:
        tree_set = SteinerTreeSetSchema().load(data.get("tree_set", data))
    except Exception as exc:  # marshmallow.ValidationError or a bad vertex
        raise click.UsageError(f"{path} is not a tree-set file: {exc}") from exc
    graph = build_godan(tree_set.n)
    report = verify_idst(
        graph,
        tree_set.trees,
        tree_set.terminals,
        expected=tree_set.n - 1,
        subject=str(tree_set.case),
    )
    click.echo(VerificationReportSchema().dumps(report, indent=2))
    if not report.overall:
        _fail(f"{path}: {report.failures()[0].name} failed")


@main.command()
@click.option("--n", "n", type=click.IntRange(min=3, max=SUITE_MAX_N), required=True)
@seed_option
@out_option
def suite(n: int, seed: int | None, out: Path | None) -> None:
    """Machine-check the structural facts about EA_n."""
    report = structural_suite(n, seed=seed)
    _emit(VerificationReportSchema().dumps(report, indent=2) + "\n", out)
    if not report.overall:
        _fail(f"{len(report.failures())} structural checks failed")


if __name__ == "__main__":
    main()
