"""
Result stores for sweep rows.

- DuckDBSweepStore: a table per database file, queried for the summary and
  the case histogram (``--db PATH``)
- MemorySweepStore: rows kept in a list, the default

Both implement the SweepStore protocol.
"""

import threading
from collections import Counter
from collections.abc import Iterable
from typing import Any, Protocol

try:
    import duckdb as _duckdb
except ImportError:  # pragma: no cover - optional dependency
    _duckdb = None  # type: ignore[assignment]

from godan_idst.core.exceptions import ConfigurationError
from godan_idst.dto.models import SweepRow


class SweepStore(Protocol):
    """Storage interface for sweep rows."""

    def add_rows(self, run_id: str, rows: Iterable[SweepRow]) -> int:
        """Persist rows under ``run_id``; returns the number written."""
        ...

    def rows(self, run_id: str) -> list[SweepRow]:
        """Rows of a run in insertion order."""
        ...

    def summary(self, run_id: str) -> dict[str, Any]:
        """``{rows, min_trees, max_trees, failures}`` for a run."""
        ...

    def histogram(self, run_id: str) -> dict[str, int]:
        """Row count per case tag."""
        ...

    def close(self) -> None:
        """Release any underlying resources held by the store."""
        ...


class DuckDBSweepStore:
    """DuckDB-backed store; one table shared by every run written to the file."""

    def __init__(self, db_path: str) -> None:
        if _duckdb is None:  # pragma: no cover - only for missing dependency
            raise ConfigurationError("DuckDBSweepStore requires the 'duckdb' package")
        self._db_path = db_path
        self._lock = threading.Lock()
        self._conn = _duckdb.connect(database=db_path)
        self._init_schema()

    def _init_schema(self) -> None:
        with self._lock:
            self._conn.execute(
                """
                CREATE TABLE IF NOT EXISTS sweep_rows (
                    run_id TEXT NOT NULL,
                    seq INTEGER NOT NULL,
                    n INTEGER NOT NULL,
                    s TEXT NOT NULL,
                    trees INTEGER NOT NULL,
                    case_tag TEXT NOT NULL,
                    verify BOOLEAN NOT NULL,
                    millis BIGINT NOT NULL,
                    PRIMARY KEY (run_id, seq)
                );
                """
            )

    def add_rows(self, run_id: str, rows: Iterable[SweepRow]) -> int:
        with self._lock:
            start = self._conn.execute(
                "SELECT COALESCE(MAX(seq) + 1, 0) FROM sweep_rows WHERE run_id = ?", [run_id]
            ).fetchone()[0]
            values = [
                [
                    run_id,
                    start + i,
                    r.n,
                    ";".join(r.terminals),
                    r.trees,
                    r.case_tag,
                    r.verify,
                    r.millis,
                ]
                for i, r in enumerate(rows)
            ]
            if values:
                self._conn.executemany(
                    "INSERT INTO sweep_rows VALUES (?, ?, ?, ?, ?, ?, ?, ?)", values
                )
        return len(values)

    def rows(self, run_id: str) -> list[SweepRow]:
        with self._lock:
            found = self._conn.execute(
                """
                SELECT n, s, trees, case_tag, verify, millis
                FROM sweep_rows WHERE run_id = ? ORDER BY seq
                """,
                [run_id],
            ).fetchall()
        return [_row_from_tuple(row) for row in found]

    def summary(self, run_id: str) -> dict[str, Any]:
        with self._lock:
            count, low, high = self._conn.execute(
                "SELECT COUNT(*), MIN(trees), MAX(trees) FROM sweep_rows WHERE run_id = ?",
                [run_id],
            ).fetchone()
            failures = self._conn.execute(
                "SELECT s FROM sweep_rows WHERE run_id = ? AND NOT verify ORDER BY seq", [run_id]
            ).fetchall()
        return {
            "rows": count,
            "min_trees": low,
            "max_trees": high,
            "failures": [row[0] for row in failures],
        }

    def histogram(self, run_id: str) -> dict[str, int]:
        with self._lock:
            found = self._conn.execute(
                """
                SELECT case_tag, COUNT(*) FROM sweep_rows
                WHERE run_id = ? GROUP BY case_tag ORDER BY case_tag
                """,
                [run_id],
            ).fetchall()
        return {tag: count for tag, count in found}

    def close(self) -> None:
        with self._lock:
            self._conn.close()


class MemorySweepStore:
    """In-memory store for tests and one-shot runs."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._runs: dict[str, list[SweepRow]] = {}

    def add_rows(self, run_id: str, rows: Iterable[SweepRow]) -> int:
        items = list(rows)
        with self._lock:
            self._runs.setdefault(run_id, []).extend(items)
        return len(items)

    def rows(self, run_id: str) -> list[SweepRow]:
        with self._lock:
            return list(self._runs.get(run_id, []))

    def summary(self, run_id: str) -> dict[str, Any]:
        rows = self.rows(run_id)
        counts = [r.trees for r in rows]
        return {
            "rows": len(rows),
            "min_trees": min(counts, default=None),
            "max_trees": max(counts, default=None),
            "failures": [";".join(r.terminals) for r in rows if not r.verify],
        }

    def histogram(self, run_id: str) -> dict[str, int]:
        return dict(sorted(Counter(r.case_tag for r in self.rows(run_id)).items()))

    def close(self) -> None:
        return None


def _row_from_tuple(row: tuple[Any, ...]) -> SweepRow:
    n, s, trees, case_tag, verify, millis = row
    return SweepRow(
        n=n,
        terminals=s.split(";"),
        trees=trees,
        case_tag=case_tag,
        verify=bool(verify),
        millis=millis,
    )


def create_store(db_path: str | None) -> SweepStore:
    """DuckDB when a path is given, memory otherwise."""
    if db_path:
        return DuckDBSweepStore(db_path)
    return MemorySweepStore()
