import pytest

from godan_idst.core.exceptions import ConstructionError
from godan_idst.dto.models import CSV_COLUMNS
from godan_idst.sweeps import build_row, rows_from_csv, rows_to_csv, run_sweep
from godan_idst.sweeps.util import exhaustive_subsets, sampled_subsets


@pytest.fixture
def ea3_rows(ea3):
    return list(run_sweep(3, exhaustive_subsets(ea3), fallback=False, jobs=1))


def test_ea3_sweep(ea3_rows):
    assert len(ea3_rows) == 15  # noqa: PLR2004
    assert all(row.verify and row.trees == 2 for row in ea3_rows)  # noqa: PLR2004
    assert all(row.case_tag.startswith("EA3/") for row in ea3_rows)
    assert all(row.millis == 0 for row in ea3_rows)
    assert ea3_rows[0].terminals == ("123", "132", "213", "231")


def test_rows_are_independent_of_job_count(ea4):
    subsets = list(sampled_subsets(ea4, 12, seed=9))
    inline = list(run_sweep(4, subsets, jobs=1))
    pooled = list(run_sweep(4, subsets, jobs=2))
    assert inline == pooled
    assert all(row.trees == 3 for row in inline)  # noqa: PLR2004


def test_failed_subset_becomes_failed_row(mocker):
    mocker.patch(
        "godan_idst.sweeps.scheduler.build_idsts",
        side_effect=ConstructionError("no construction"),
    )
    row = build_row((0, 4, ("1234", "2341", "3412", "4123"), None, False, False))
    assert not row.verify
    assert row.trees == 0
    assert row.case_tag == "ConstructionError"


def test_timings_fill_millis(ea3):
    subset = next(iter(exhaustive_subsets(ea3)))
    (row,) = run_sweep(3, [subset], timings=True, jobs=1)
    assert row.millis >= 0
    assert row.verify


def test_csv_round_trip(ea3_rows):
    text = rows_to_csv(ea3_rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1].startswith("3,123;132;213;231,2,EA3/")
    assert len(lines) == 16  # noqa: PLR2004
    assert rows_from_csv(text) == ea3_rows
