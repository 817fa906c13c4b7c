import pytest

from godan_idst.config import settings
from godan_idst.core.exceptions import GraphSizeError, NonDistinctVerticesError, VertexAbsentError
from godan_idst.core.graphs import AdjacencyGraph
from godan_idst.core.oracle import (
    descent_check,
    graph_label,
    kappa_k_exact,
    kappa_S_exact,
    upper_bound_min_degree_rule,
    whitney_kappa,
)
from godan_idst.core.permutations import Permutation
from godan_idst.core.verify import verify_idst

p = Permutation.parse


@pytest.fixture
def star():
    return AdjacencyGraph([(0, 1), (0, 2), (0, 3)])


def test_graph_label(ea4, an4, star):
    assert graph_label(ea4) == "EA_4"
    assert graph_label(an4) == "AN_4"
    assert graph_label(star) == "adjacency"


def test_kappa_S_ea4_spread(ea4):  # noqa: N802
    terminals = [p(s) for s in ("1234", "2341", "3412", "4123")]
    result = kappa_S_exact(ea4, terminals)
    assert result.max_t == 3  # noqa: PLR2004
    assert result.complete
    assert verify_idst(ea4, result.witness, terminals, expected=3).overall


def test_kappa_S_ea3(ea3):  # noqa: N802
    terminals = [p(s) for s in ("123", "231", "312", "213")]
    result = kappa_S_exact(ea3, terminals)
    assert result.max_t == 2  # noqa: PLR2004
    assert result.terminals == tuple(sorted(terminals))


def test_kappa_S_warm_start_from_above(ea4):  # noqa: N802
    terminals = [p("1234"), p("2134"), p("3412")]
    result = kappa_S_exact(ea4, terminals, warm_start=10)
    assert result.max_t == 3  # noqa: PLR2004


def test_kappa_S_input_errors(ea4):  # noqa: N802
    with pytest.raises(NonDistinctVerticesError):
        kappa_S_exact(ea4, [p("1234"), p("1234")])
    with pytest.raises(VertexAbsentError):
        kappa_S_exact(ea4, [p("1234"), p("12345")])


def test_kappa_S_size_limit(env, ea4):  # noqa: N802
    env.setenv("GODAN_SEARCH__MAX_VERTICES", "10")
    settings.reload()
    with pytest.raises(GraphSizeError):
        kappa_S_exact(ea4, [p("1234"), p("4321")])


@pytest.mark.parametrize(("fixture", "k", "value"), [("ea3", 4, 2), ("ea3", 3, 2), ("an4", 4, 2)])
def test_kappa_k_small(request, fixture, k, value):
    graph = request.getfixturevalue(fixture)
    result = kappa_k_exact(graph, k)
    assert result.value == value
    assert result.exhaustive
    assert result.seed is None
    assert len(result.minimizer) == k


@pytest.mark.slow
@pytest.mark.parametrize(("k", "value"), [(4, 3), (3, 3)])
def test_kappa_k_ea4(ea4, k, value):
    assert kappa_k_exact(ea4, k).value == value


def test_kappa_k_sampled_is_reproducible(ea4):
    first = kappa_k_exact(ea4, 4, exhaustive=False, sample=15, seed=11)
    second = kappa_k_exact(ea4, 4, exhaustive=False, sample=15, seed=11)
    assert first == second
    assert first.seed == 11  # noqa: PLR2004
    assert first.subsets == 15  # noqa: PLR2004
    assert first.value >= 3  # noqa: PLR2004


def test_kappa_k_ranges(ea3, ea5):
    with pytest.raises(GraphSizeError):
        kappa_k_exact(ea3, 1)
    with pytest.raises(GraphSizeError):
        kappa_k_exact(ea3, 7)
    with pytest.raises(GraphSizeError):
        kappa_k_exact(ea5, 4)


def test_upper_bound_rule(ea4, ea5, star):
    assert upper_bound_min_degree_rule(ea4, 4) == 3  # noqa: PLR2004
    assert upper_bound_min_degree_rule(ea5, 4) == 4  # noqa: PLR2004
    # no two adjacent leaves in a star
    assert upper_bound_min_degree_rule(star, 3) is None
    assert upper_bound_min_degree_rule(AdjacencyGraph([(0, 1), (2, 3)]), 3) == 0
    with pytest.raises(GraphSizeError):
        upper_bound_min_degree_rule(ea4, 2)


@pytest.mark.parametrize(("fixture", "value"), [("ea3", 3), ("an4", 3), ("ea4", 4)])
def test_whitney_kappa(request, fixture, value):
    assert whitney_kappa(request.getfixturevalue(fixture)) == value


def test_descent_check_ea3(ea3):
    result = descent_check(ea3, 4)
    assert result.r == 3  # noqa: PLR2004
    assert result.kappa_k == 2  # noqa: PLR2004
    assert result.kappa_k_minus_1 == 2  # noqa: PLR2004
    assert result.premise
    assert result.holds
