import pytest

from godan_idst.dto.models import RunConfig, SweepRow, VerificationReport
from godan_idst.reporting import (
    build_tree_set_report,
    case_family,
    coverage_histogram,
    summarize_sweep,
)


def _row(terminals, trees=3, case_tag="S22/Case1", verify=True):
    return SweepRow(n=4, terminals=terminals, trees=trees, case_tag=case_tag, verify=verify)


@pytest.fixture
def rows():
    return [
        _row(("1234", "2134", "4321", "3421"), case_tag="S22/Case2/Subcase2.1"),
        _row(("1234", "2341", "3412", "4123"), case_tag="S1111/Case2"),
        _row(("1234", "2134", "4321", "4312"), case_tag="S22/Case2/Subcase2.3"),
        _row(("1234", "1324", "2134", "3214"), trees=2, case_tag="Search/S3?", verify=False),
    ]


@pytest.mark.parametrize(
    ("tag", "family"),
    [
        ("S22/Case2/Subcase2.1", "S22/Case2"),
        ("S4", "S4"),
        ("Search/S3?", "Search/S3"),
        ("not a tag", "not a tag"),
    ],
)
def test_case_family(tag, family):
    assert case_family(tag) == family


def test_coverage_histogram(rows):
    assert coverage_histogram(rows) == {
        "S1111/Case2": 1,
        "S22/Case2/Subcase2.1": 1,
        "S22/Case2/Subcase2.3": 1,
        "Search/S3?": 1,
    }
    assert coverage_histogram(rows, depth="family") == {
        "S1111/Case2": 1,
        "S22/Case2": 2,
        "Search/S3": 1,
    }


def test_summarize_sweep(rows):
    config = RunConfig(n=4, command="sweep", subsets="sample", sample=4, seed=3, fmt="csv")
    summary = summarize_sweep(rows, config=config)
    assert summary["rows"] == 4  # noqa: PLR2004
    assert summary["min_trees"] == 2  # noqa: PLR2004
    assert summary["max_trees"] == 3  # noqa: PLR2004
    assert summary["expected_trees"] == 3  # noqa: PLR2004
    assert summary["failures"] == ["1234;1324;2134;3214"]
    assert summary["suspect"] == 1
    assert summary["run"]["seed"] == 3  # noqa: PLR2004
    assert summary["run"]["format"] == "csv"


def test_summarize_empty_sweep():
    summary = summarize_sweep([])
    assert summary["rows"] == 0
    assert summary["min_trees"] is None
    assert summary["expected_trees"] is None
    assert summary["run"] is None


def test_tree_set_report_without_config(mocker):
    report = VerificationReport(subject="S4")
    report.add("tree count", True)
    dump = mocker.patch("godan_idst.reporting.SteinerTreeSetSchema.dump", return_value={"n": 4})
    payload = build_tree_set_report(mocker.sentinel.tree_set, report)
    dump.assert_called_once_with(mocker.sentinel.tree_set)
    assert payload["tree_set"] == {"n": 4}
    assert payload["verification"]["overall"] is True
    assert payload["run"] is None
