import pytest

from godan_idst.core.connectivity import PathFamily, PathKind
from godan_idst.core.graphs import AdjacencyGraph
from godan_idst.core.packing import find_packing
from godan_idst.core.permutations import Permutation
from godan_idst.core.trees import Tree
from godan_idst.core.verify import structural_suite, verify_idst, verify_path_family, verify_stree

p = Permutation.parse

SPREAD = [p(s) for s in ("1234", "2341", "3412", "4123")]


@pytest.fixture
def packing(ea4):
    return find_packing(ea4.view(), SPREAD, 3).trees


def _failed(report):
    return {c.name: c.detail for c in report.failures()}


def test_valid_packing_passes(ea4, packing):
    report = verify_idst(ea4, packing, SPREAD, expected=3)
    assert report.overall
    assert {"tree count", "T1: acyclic", "T2/T3: vertices", "T1/T3: edges"} <= {
        c.name for c in report.checks
    }


def test_wrong_tree_count(ea4, packing):
    report = verify_idst(ea4, packing[:2], SPREAD, expected=3)
    assert _failed(report) == {"tree count": "2 trees, expected 3"}


def test_shared_tree_is_rejected(ea4, packing):
    report = verify_idst(ea4, [packing[0], packing[0]], SPREAD)
    failed = _failed(report)
    assert failed["T1/T2: edges"].startswith("shared edges:")
    if packing[0].vertices - set(SPREAD):
        assert failed["T1/T2: vertices"].startswith("internal vertex shared:")


def test_missing_terminal(ea4, packing):
    report = verify_stree(ea4, packing[0], [*SPREAD, p("4321")], name="T1")
    assert _failed(report)["T1: S covered"] == "S not covered: missing 4321"


def test_removed_edge_is_detected(ea4, packing):
    u, v = packing[0].sorted_edges()[0]
    mutated = AdjacencyGraph.copy_of(ea4, drop=[(u, v)])
    report = verify_stree(mutated, packing[0], SPREAD, name="T1")
    assert _failed(report)["T1: edges present"] == f"edge absent: {u}-{v}"


def test_cycle_and_disconnection(ea4):
    x, y, z = p("1234"), p("2314"), p("3124")
    triangle = Tree.from_edges([(x, y), (y, z), (x, z)])
    assert "T: acyclic" in _failed(verify_stree(ea4, triangle, [p("1234")], name="T"))
    apart = Tree.from_edges([(p("1234"), p("2134"))], vertices=[p("4321")])
    assert "T: connected" in _failed(verify_stree(ea4, apart, [p("1234")], name="T"))


def test_path_family_report(ea4):
    good = PathFamily(PathKind.INTERNALLY_DISJOINT, [(p("1234"), p("2134"))])
    assert verify_path_family(ea4.view(), good).overall
    bad = PathFamily(PathKind.INTERNALLY_DISJOINT, [(p("1234"), p("4321"))])
    assert not verify_path_family(ea4.view(), bad).overall


@pytest.mark.parametrize("n", [3, 4])
def test_structural_suite_passes(n):
    report = structural_suite(n, seed=1)
    assert report.overall, _failed(report)
    assert report.subject == f"structure EA_{n}"


def test_structural_suite_catches_missing_edge(ea4):
    mutated = AdjacencyGraph.copy_of(ea4, drop=[ea4.edges()[0]])
    report = structural_suite(4, graph=mutated, seed=1)
    failed = _failed(report)
    assert not report.overall
    assert "edge count" in failed
    assert "regularity" in failed


@pytest.mark.slow
def test_structural_suite_ea5():
    assert structural_suite(5, seed=3).overall
