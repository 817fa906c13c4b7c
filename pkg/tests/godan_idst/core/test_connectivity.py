import pytest

from godan_idst.core.connectivity import (
    PathKind,
    disjoint_set_paths,
    family_is_valid,
    internally_disjoint_paths,
    is_connected,
    k_fan,
    local_connectivity,
    min_vertex_cut,
    steiner_tree,
    vertex_connectivity,
)
from godan_idst.core.exceptions import (
    AdjacentPairError,
    ConnectivityError,
    DisconnectedTerminalsError,
    InsufficientPathsError,
    NonDistinctVerticesError,
    VertexAbsentError,
)
from godan_idst.core.graphs import AdjacencyGraph, as_view, cluster_view
from godan_idst.core.permutations import Permutation

p = Permutation.parse


@pytest.fixture
def cycle6():
    return AdjacencyGraph([(i, (i + 1) % 6) for i in range(6)])


@pytest.mark.parametrize(("fixture", "kappa"), [("ea3", 3), ("ea4", 4), ("an4", 3)])
def test_vertex_connectivity(request, fixture, kappa):
    graph = request.getfixturevalue(fixture)
    assert vertex_connectivity(as_view(graph)) == kappa


def test_vertex_connectivity_small_graphs(cycle6):
    assert vertex_connectivity(as_view(cycle6)) == 2  # noqa: PLR2004
    apart = AdjacencyGraph([(0, 1), (2, 3)])
    assert vertex_connectivity(as_view(apart)) == 0
    assert not is_connected(as_view(apart))


def test_internally_disjoint_paths_non_adjacent(ea4):
    view = as_view(ea4)
    x, y = p("1234"), p("4321")
    family = internally_disjoint_paths(view, x, y, 4)
    assert len(family) == 4  # noqa: PLR2004
    assert family.kind is PathKind.INTERNALLY_DISJOINT
    assert all(path[0] == x and path[-1] == y for path in family)
    assert family_is_valid(view, family)


def test_adjacent_pair_counts_direct_edge(ea4):
    view = as_view(ea4)
    x, y = p("1234"), p("2134")
    assert local_connectivity(view, x, y) == 4  # noqa: PLR2004
    family = internally_disjoint_paths(view, x, y, 4)
    assert (x, y) in family.paths
    with pytest.raises(AdjacentPairError):
        min_vertex_cut(view, x, y)


def test_too_many_paths_reports_cut(ea4):
    view = as_view(ea4)
    x, y = p("1234"), p("4321")
    with pytest.raises(InsufficientPathsError) as excinfo:
        internally_disjoint_paths(view, x, y, 5)
    assert excinfo.value.found == 4  # noqa: PLR2004
    assert excinfo.value.requested == 5  # noqa: PLR2004
    assert excinfo.value.cut is not None
    assert len(excinfo.value.cut) == 4  # noqa: PLR2004


def test_min_vertex_cut_separates(ea4):
    view = as_view(ea4)
    x, y = p("1234"), p("4321")
    cut = min_vertex_cut(view, x, y)
    assert len(cut) == 4  # noqa: PLR2004
    assert y not in view.without(*cut).component_of(x)


def test_endpoint_errors(ea4):
    view = as_view(ea4)
    with pytest.raises(NonDistinctVerticesError):
        local_connectivity(view, p("1234"), p("1234"))
    with pytest.raises(VertexAbsentError):
        local_connectivity(view.without(p("1234")), p("1234"), p("4321"))


def test_k_fan(ea4):
    view = as_view(ea4)
    x = p("1234")
    targets = [v for v in ea4.vertices() if v(4) == 1]
    family = k_fan(view, x, targets, 4)
    assert family.kind is PathKind.FAN
    assert len(set(family.endpoints())) == 4  # noqa: PLR2004
    assert all(end in targets for end in family.endpoints())
    assert family_is_valid(view, family)
    with pytest.raises(ConnectivityError):
        k_fan(view, x, [x, *targets], 1)
    with pytest.raises(InsufficientPathsError):
        k_fan(view, x, targets[:2], 3)


def test_disjoint_set_paths_between_clusters(ea5):
    view = as_view(ea5)
    sources = cluster_view(ea5, 5, [1]).vertices()
    sinks = cluster_view(ea5, 5, [2]).vertices()
    family = disjoint_set_paths(view, sources, sinks, 5)
    assert family.kind is PathKind.SET_DISJOINT
    assert family_is_valid(view, family)
    for path in family:
        assert path[0] in sources
        assert path[-1] in sinks
        assert not set(path[1:-1]) & (set(sources) | set(sinks))


def test_set_paths_share_intersection_as_trivial_paths(cycle6):
    family = disjoint_set_paths(as_view(cycle6), [0, 1], [1, 3], 2)
    assert (1,) in family.paths


def test_family_is_valid_rejects_shared_vertex(ea4):
    view = as_view(ea4)
    x, y = p("1234"), p("4321")
    family = internally_disjoint_paths(view, x, y, 2)
    bad = type(family)(family.kind, [family[0], family[0]])
    assert not family_is_valid(view, bad)


def test_steiner_tree(ea4):
    view = as_view(ea4)
    terminals = [p("1234"), p("2341"), p("3412"), p("4123")]
    tree = steiner_tree(view, terminals)
    assert tree.is_tree()
    assert set(terminals) <= tree.vertices
    assert all(ea4.is_edge(u, v) for u, v in tree.edges)


def test_steiner_tree_avoids_edges(cycle6):
    tree = steiner_tree(as_view(cycle6), [0, 2], avoid_edges=[(0, 1)])
    assert tree.sorted_edges() == [(0, 5), (2, 3), (3, 4), (4, 5)]


def test_steiner_tree_disconnected(cycle6):
    view = as_view(cycle6).without(1, 4)
    with pytest.raises(DisconnectedTerminalsError):
        steiner_tree(view, [0, 2])
