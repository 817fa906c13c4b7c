import itertools

import pytest

from godan_idst.core.exceptions import (
    ClusterError,
    GraphSizeError,
    NonDistinctVerticesError,
    VertexAbsentError,
)
from godan_idst.core.graphs import (
    AdjacencyGraph,
    ClusterRef,
    GodanGraph,
    an_part_of,
    as_view,
    cluster_isomorphism,
    cluster_of,
    cluster_view,
    cross_edges,
    is_triangle,
    ordered_neighbors,
    out_neighbor,
    parity_neighbor,
    to_networkx,
    two_step_path,
)
from godan_idst.core.permutations import Parity, Permutation, compose, parity

p = Permutation.parse


@pytest.mark.parametrize(
    ("fixture", "vertices", "edges", "degree"),
    [("ea3", 6, 9, 3), ("ea4", 24, 48, 4), ("ea5", 120, 300, 5), ("an4", 12, 18, 3)],
)
def test_sizes_and_regularity(request, fixture, vertices, edges, degree):
    graph = request.getfixturevalue(fixture)
    assert graph.num_vertices == vertices
    assert graph.num_edges == edges
    assert {graph.degree(v) for v in graph.vertices()} == {degree}


def test_vertices_in_rank_order(ea4):
    ranks = [v.rank() for v in ea4.vertices()]
    assert ranks == list(range(24))


def test_small_order_rejected():
    with pytest.raises(GraphSizeError):
        GodanGraph(2)


def test_neighbors_symmetric_and_sorted(ea4):
    for v in ea4.vertices():
        nbrs = ea4.neighbors(v)
        assert list(nbrs) == sorted(nbrs)
        assert all(v in ea4.neighbors(u) for u in nbrs)


def test_alt_network_has_only_even_vertices(an4):
    assert all(parity(v) is Parity.EVEN for v in an4.vertices())
    assert not an4.has_vertex(p("2134"))
    with pytest.raises(VertexAbsentError):
        an4.neighbors(p("2134"))


def test_edges_listed_once(ea4):
    edges = ea4.edges()
    assert len(edges) == len(set(edges)) == ea4.num_edges
    assert all(u < v for u, v in edges)


def test_parity_neighbor_crosses_parts(ea4):
    for v in ea4.vertices():
        u = parity_neighbor(v)
        assert ea4.is_edge(u, v)
        assert an_part_of(u) != an_part_of(v)


def test_out_neighbor_leaves_cluster(ea5):
    for m in (4, 5):
        for v in ea5.vertices():
            u = out_neighbor(v, m)
            assert ea5.is_edge(u, v)
            assert cluster_of(u, m) != cluster_of(v, m)
            # exactly one neighbor outside the cluster
            outside = [w for w in ea5.neighbors(v) if w(m) != v(m)]
            assert outside == [u]


def test_ordered_neighbors_known_value():
    assert ordered_neighbors(p("1234"), 4) == {1: p("2314"), 2: p("3124"), 3: p("2134")}


def test_two_step_paths():
    assert two_step_path(p("1234"), 1, 4) == (p("1234"), p("2314"), p("3241"))
    assert two_step_path(p("1234"), 3, 4) == (p("1234"), p("2134"), p("1243"))
    with pytest.raises(ClusterError):
        two_step_path(p("1234"), 4, 4)


def test_two_step_paths_land_in_target_cluster(ea5):
    for v in ea5.vertices()[:30]:
        for j in range(1, 6):
            if j == v(5):
                continue
            path = two_step_path(v, j, 5)
            assert path[-1](5) == j
            assert all(ea5.is_edge(a, b) for a, b in itertools.pairwise(path))


def test_position_checked():
    with pytest.raises(ClusterError):
        cluster_of(p("1234"), 3)
    with pytest.raises(ClusterError):
        out_neighbor(p("1234"), 5)


@pytest.mark.parametrize(("fixture", "count"), [("ea4", 2), ("ea5", 6)])
def test_cross_edges_between_clusters(request, fixture, count):
    graph = request.getfixturevalue(fixture)
    n = graph.n
    for i, j in itertools.combinations(range(1, n + 1), 2):
        assert len(cross_edges(graph, n, i, j)) == count


def test_cross_edges_needs_two_clusters(ea4):
    with pytest.raises(ClusterError):
        cross_edges(ea4, 4, 1, 1)


def test_triangles(ea4):
    x = p("1234")
    y, z = p("2314"), p("3124")
    assert is_triangle(x, y, z)
    assert not is_triangle(x, p("2134"), y)
    with pytest.raises(NonDistinctVerticesError):
        is_triangle(x, x, y)


def test_cluster_isomorphism_preserves_adjacency(ea5):
    small = GodanGraph(4)
    for m in (4, 5):
        for i in range(1, 6):
            iso = cluster_isomorphism(ClusterRef(m, i), 5)
            members = [v for v in ea5.vertices() if v(m) == i]
            assert sorted(iso.to_small(v) for v in members) == list(small.vertices())
            for v in members:
                assert iso.to_large(iso.to_small(v)) == v
                inside = {u for u in ea5.neighbors(v) if u(m) == i}
                assert {iso.to_small(u) for u in inside} == set(small.neighbors(iso.to_small(v)))


def test_cluster_isomorphism_rejects_foreign_vertex():
    iso = cluster_isomorphism(ClusterRef(4, 1), 4)
    with pytest.raises(ClusterError):
        iso.to_small(p("1234"))


def test_cluster_view_is_copy_of_smaller_graph(ea5):
    view = cluster_view(ea5, 5, [2])
    assert view.num_vertices == 24  # noqa: PLR2004
    assert view.num_edges == 48  # noqa: PLR2004
    assert view.is_connected()


def test_subgraph_view_operations(ea4):
    view = as_view(ea4)
    v = p("1234")
    smaller = view.without(v)
    assert not smaller.has_vertex(v)
    assert smaller.num_vertices == 23  # noqa: PLR2004
    assert v not in {u for w in smaller.vertices() for u in smaller.neighbors(w)}
    induced = view.induced(ea4.neighbors(v))
    assert set(induced.vertices()) == set(ea4.neighbors(v))
    even = view.restrict(lambda u: an_part_of(u) == 1)
    assert even.num_vertices == 12  # noqa: PLR2004
    # views over views flatten
    nested = smaller.without(p("2134"))
    assert nested.base is ea4
    assert nested.deleted == {v, p("2134")}


def test_adjacency_graph_and_copy(ea4):
    star = AdjacencyGraph([(0, 1), (0, 2), (0, 3)])
    assert star.num_vertices == 4  # noqa: PLR2004
    assert star.degree(0) == 3  # noqa: PLR2004
    with pytest.raises(NonDistinctVerticesError):
        AdjacencyGraph([(1, 1)])
    e = ea4.edges()[0]
    mutated = AdjacencyGraph.copy_of(ea4, drop=[e])
    assert mutated.num_edges == ea4.num_edges - 1
    assert not mutated.is_edge(*e)


def test_left_multiplication_is_automorphism(ea4):
    sigma = p("3142")
    for u, v in ea4.edges():
        assert ea4.is_edge(compose(sigma, u), compose(sigma, v))


def test_networkx_view_follows_deletions(ea4):
    v = p("1234")
    view = as_view(ea4).without(v)
    g = to_networkx(view)
    assert g.number_of_nodes() == 23  # noqa: PLR2004
    assert g.number_of_edges() == 48 - 4
    assert v not in g
    assert view.is_connected()
    # the four neighbors of 1234 cut it off from the rest
    isolated = as_view(ea4).without(*ea4.neighbors(v))
    assert isolated.component_of(v) == {v}
    assert not isolated.is_connected()
    with pytest.raises(VertexAbsentError):
        view.component_of(v)
    assert not as_view(ea4).induced([]).is_connected()
