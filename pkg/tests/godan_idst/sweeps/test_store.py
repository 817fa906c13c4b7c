import pytest

from godan_idst.dto.models import SweepRow
from godan_idst.sweeps import MemorySweepStore, create_store


def _row(terminals, trees, case_tag, verify=True, millis=0):
    return SweepRow(
        n=4,
        terminals=tuple(terminals.split(";")),
        trees=trees,
        case_tag=case_tag,
        verify=verify,
        millis=millis,
    )


def _rows():
    return [
        _row("1234;2341;3412;4123", 3, "S1111/Case2"),
        _row("1234;1324;2134;3214", 3, "Recurse/EA3/Case1", millis=4),
        _row("1234;2134;4321;3421", 0, "ConstructionError", verify=False),
    ]


def _assert_basic_flow(store):
    rows = _rows()
    assert store.add_rows("run-1", rows[:2]) == 2  # noqa: PLR2004
    assert store.add_rows("run-1", rows[2:]) == 1
    store.add_rows("run-2", rows[:1])

    assert store.rows("run-1") == rows
    assert store.rows("missing") == []

    summary = store.summary("run-1")
    assert summary["rows"] == 3  # noqa: PLR2004
    assert summary["min_trees"] == 0
    assert summary["max_trees"] == 3  # noqa: PLR2004
    assert summary["failures"] == ["1234;2134;4321;3421"]

    assert store.histogram("run-1") == {
        "ConstructionError": 1,
        "Recurse/EA3/Case1": 1,
        "S1111/Case2": 1,
    }
    assert store.histogram("run-2") == {"S1111/Case2": 1}


def test_memory_store_basic_flow():
    store = MemorySweepStore()
    _assert_basic_flow(store)
    store.close()


def test_duckdb_store_basic_flow(tmp_path):
    pytest.importorskip("duckdb")
    from godan_idst.sweeps.store import DuckDBSweepStore  # noqa: PLC0415

    store = DuckDBSweepStore(str(tmp_path / "sweeps.duckdb"))
    try:
        _assert_basic_flow(store)
    finally:
        store.close()


def test_duckdb_store_persists(tmp_path):
    pytest.importorskip("duckdb")
    from godan_idst.sweeps.store import DuckDBSweepStore  # noqa: PLC0415

    path = str(tmp_path / "sweeps.duckdb")
    store = DuckDBSweepStore(path)
    store.add_rows("run", _rows())
    store.close()

    reopened = DuckDBSweepStore(path)
    try:
        assert reopened.rows("run") == _rows()
        assert reopened.add_rows("run", _rows()[:1]) == 1
        assert reopened.summary("run")["rows"] == 4  # noqa: PLR2004
    finally:
        reopened.close()


def test_create_store(tmp_path):
    assert isinstance(create_store(None), MemorySweepStore)
    pytest.importorskip("duckdb")
    store = create_store(str(tmp_path / "x.duckdb"))
    try:
        assert type(store).__name__ == "DuckDBSweepStore"
    finally:
        store.close()
