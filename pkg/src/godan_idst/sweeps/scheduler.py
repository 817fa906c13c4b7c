"""
Sweep scheduler.

Each subset is an independent task: build, verify, emit one `SweepRow`.
Tasks fan out over a process pool and come back in submission order, so the
rows (and the CSV written from them) depend only on the subset sequence.
With one job everything runs inline.
"""

import csv
import io
import time
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor

from godan_idst.builder import build_idsts
from godan_idst.core.exceptions import ConstructionError, InternalConsistencyError
from godan_idst.core.graphs import build_godan
from godan_idst.core.permutations import Permutation
from godan_idst.dto.models import CSV_COLUMNS, SweepRow, SweepRowSchema
from godan_idst.sweeps.util import resolve_jobs
from godan_idst.utils.logging import clear_context, get_logger, set_context
from godan_idst.utils.telemetry import telemetry

logger = get_logger(__name__)

CHUNK_SIZE = 64

Task = tuple[int, int, tuple[str, ...], int | None, bool, bool]


def build_row(task: Task) -> SweepRow:
    """
    Build and verify one subset.

    A `ConstructionError` or `InternalConsistencyError` becomes a failed row
    (``trees=0``, ``verify=False``, the error class as case tag).
    """
    index, n, text, m, fallback, timings = task
    graph = build_godan(n)
    terminals = [Permutation.parse(s, n) for s in text]
    set_context(n=n, subset_index=index)
    started = time.perf_counter_ns()
    try:
        result = build_idsts(graph, terminals, m=m, fallback=fallback)
    except (ConstructionError, InternalConsistencyError) as exc:
        logger.error("subset failed", terminals=terminals, error=str(exc))
        telemetry.get_counter("idst.verification_failures").add(1)
        return SweepRow(n=n, terminals=text, trees=0, case_tag=type(exc).__name__, verify=False)
    finally:
        clear_context("n", "subset_index")
    millis = (time.perf_counter_ns() - started) // 1_000_000 if timings else 0
    return SweepRow(
        n=n,
        terminals=text,
        trees=len(result),
        case_tag=str(result.case),
        verify=True,
        millis=millis,
    )


def run_sweep(
    n: int,
    subsets: Iterable[Sequence[Permutation]],
    *,
    m: int | None = None,
    fallback: bool = True,
    timings: bool = False,
    jobs: int | None = None,
) -> Iterator[SweepRow]:
    """
    Yield one row per subset, in subset order.

    Args:
        n: Graph order.
        subsets: Four-vertex terminal sets.
        m: Preferred cluster position.
        fallback: Allow the exact-packing fallback.
        timings: Measure ``millis``.
        jobs: Worker processes; None reads ``SWEEP.JOBS``.
    """
    tasks = (
        (index, n, tuple(str(s) for s in sorted(subset)), m, fallback, timings)
        for index, subset in enumerate(subsets)
    )
    workers = resolve_jobs(jobs)
    logger.info("sweep started", n=n, jobs=workers)
    if workers == 1:
        yield from map(build_row, tasks)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(build_row, tasks, chunksize=CHUNK_SIZE)


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    """CSV with the fixed columns; ``S`` is semicolon-joined."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    schema = SweepRowSchema()
    for row in rows:
        writer.writerow(schema.dump(row))
    return buffer.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    schema = SweepRowSchema()
    reader = csv.DictReader(io.StringIO(text))
    return [schema.load(_typed(record)) for record in reader]


def _typed(record: dict[str, str]) -> dict[str, object]:
    return {
        "n": int(record["n"]),
        "S": record["S"],
        "trees": int(record["trees"]),
        "case_tag": record["case_tag"],
        "verify": record["verify"] == "True",
        "millis": int(record["millis"]),
    }
