import marshmallow as ma
import pytest

from godan_idst.core.permutations import Permutation
from godan_idst.core.trees import Tree
from godan_idst.dto.models import (
    CaseTag,
    DescentResult,
    GraphDumpSchema,
    KappaResult,
    KappaResultSchema,
    Lemma,
    PackingResult,
    PackingResultSchema,
    RunConfig,
    SteinerTreeSet,
    SteinerTreeSetSchema,
    SweepRow,
    SweepRowSchema,
    VerificationReport,
    VerificationReportSchema,
)

p = Permutation.parse


@pytest.fixture
def tree_set():
    terminals = [p("3412"), p("1234"), p("2341"), p("4123")]
    trees = [
        Tree.from_path([p("1234"), p("2134"), p("2341")]),
        Tree.from_path([p("3412"), p("4123")]),
    ]
    case = CaseTag(lemma=Lemma.S1111, branch="Case2", roles=("1234",), position=4)
    return SteinerTreeSet(n=4, terminals=terminals, trees=trees, case=case)


def test_case_tag_text():
    assert str(CaseTag(lemma=Lemma.S3, branch="Case3/Subcase3.1")) == "S3/Case3/Subcase3.1"
    assert str(CaseTag(lemma=Lemma.S4)) == "S4"
    assert str(CaseTag(lemma=Lemma.SEARCH, branch="S22", suspect=True)) == "Search/S22?"


def test_case_tag_parse():
    tag = CaseTag.parse("S211/Case2/Subcase2.3?")
    assert tag.lemma is Lemma.S211
    assert tag.branch == "Case2/Subcase2.3"
    assert tag.suspect
    with pytest.raises(ValueError):
        CaseTag.parse("Nope/Case1")


def test_case_tag_nesting():
    outer = CaseTag(lemma=Lemma.RECURSE, position=5)
    inner = CaseTag(lemma=Lemma.S22, branch="Case1", suspect=True)
    nested = outer.nested(inner)
    assert str(nested) == "Recurse/S22/Case1??"
    assert nested.position == 5  # noqa: PLR2004
    assert nested.suspect


def test_tree_set_sorts_terminals(tree_set):
    assert [str(s) for s in tree_set.terminals] == ["1234", "2341", "3412", "4123"]
    assert len(tree_set) == 2  # noqa: PLR2004


def test_tree_set_schema(tree_set):
    dumped = SteinerTreeSetSchema().dump(tree_set)
    assert dumped["S"] == ["1234", "2341", "3412", "4123"]
    assert dumped["case"] == "S1111/Case2"
    assert dumped["trees"][0] == [["1234", "2134"], ["2134", "2341"]]
    loaded = SteinerTreeSetSchema().load(dumped)
    assert loaded.trees == tree_set.trees
    assert loaded.terminals == tree_set.terminals
    assert str(loaded.case) == str(tree_set.case)


def test_tree_set_schema_rejects_bad_input(tree_set):
    dumped = SteinerTreeSetSchema().dump(tree_set)
    with pytest.raises(ma.ValidationError):
        SteinerTreeSetSchema().load({**dumped, "S": ["1233"]})
    with pytest.raises(ma.ValidationError):
        SteinerTreeSetSchema().load({**dumped, "trees": [[["1234"]]]})
    with pytest.raises(ma.ValidationError):
        SteinerTreeSetSchema().load({**dumped, "case": "Bogus"})


def test_verification_report():
    report = VerificationReport(subject="demo")
    report.add("first", True)
    assert report.overall
    report.add("second", False, "broken")
    assert not report.overall
    assert [c.name for c in report.failures()] == ["second"]
    dumped = VerificationReportSchema().dump(report)
    assert dumped["overall"] is False
    assert VerificationReportSchema().load(
        {"subject": dumped["subject"], "checks": dumped["checks"]}
    ) == report


def test_packing_and_kappa_schemas():
    result = PackingResult(terminals=[p("1234"), p("4321")], max_t=4, witness=None, explored=9)
    dumped = PackingResultSchema().dump(result)
    assert dumped == {
        "S": ["1234", "4321"],
        "max_t": 4,
        "witness": None,
        "nodes": 9,
        "complete": True,
    }
    kappa = KappaResult(graph="EA_3", k=4, value=2, subsets=15, minimizer=(p("123"), p("132")))
    dumped = KappaResultSchema().dump(kappa)
    assert dumped["minimizer"] == ["123", "132"]
    assert dumped["seed"] is None


def test_sweep_row_schema():
    row = SweepRow(n=4, terminals=("1234", "2341"), trees=3, case_tag="S22/Case1", verify=True)
    dumped = SweepRowSchema().dump(row)
    assert dumped["S"] == "1234;2341"
    assert dumped["millis"] == 0
    assert SweepRowSchema().load(dumped) == row


def test_graph_dump_schema():
    payload = {"graph": "EA", "n": 3, "vertices": [p("123")], "edges": [(p("123"), p("213"))]}
    dumped = GraphDumpSchema().dump(payload)
    assert dumped["edges"] == [["123", "213"]]


def test_descent_result():
    ok = DescentResult(graph="EA_4", k=4, r=4, kappa_k=3, kappa_k_minus_1=3)
    assert ok.premise and ok.holds
    broken = DescentResult(graph="G", k=4, r=4, kappa_k=3, kappa_k_minus_1=2)
    assert broken.premise and not broken.holds
    vacuous = DescentResult(graph="G", k=4, r=4, kappa_k=2, kappa_k_minus_1=1)
    assert not vacuous.premise and vacuous.holds


def test_run_config_validation():
    config = RunConfig(n=4, command="sweep", subsets="exhaustive", fmt="csv")
    assert config.jobs == 1
    with pytest.raises(ValueError):
        RunConfig(n=4, command="sweep", subsets="everything")
    with pytest.raises(ValueError):
        RunConfig(n=2, command="idst")
