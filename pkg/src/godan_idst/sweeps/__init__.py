"""Parallel sweeps over many terminal sets and their result stores."""

from godan_idst.sweeps.scheduler import build_row, rows_from_csv, rows_to_csv, run_sweep
from godan_idst.sweeps.store import DuckDBSweepStore, MemorySweepStore, SweepStore, create_store

__all__ = [
    "DuckDBSweepStore",
    "MemorySweepStore",
    "SweepStore",
    "build_row",
    "create_store",
    "rows_from_csv",
    "rows_to_csv",
    "run_sweep",
]
