import pytest

from godan_idst.core.assembly import TreeAssembly
from godan_idst.core.exceptions import AssemblyConflictError
from godan_idst.core.graphs import AdjacencyGraph, as_view


@pytest.fixture
def grid():
    # 3x3 grid, vertices 0..8 row by row
    edges = []
    for r in range(3):
        for c in range(3):
            v = 3 * r + c
            if c < 2:  # noqa: PLR2004
                edges.append((v, v + 1))
            if r < 2:  # noqa: PLR2004
                edges.append((v, v + 3))
    return AdjacencyGraph(edges)


def test_fixed_pieces_and_steiner_request(grid):
    assembly = TreeAssembly(grid, [0, 8])
    assembly.plan("top").path([0, 1, 2, 5, 8])
    assembly.plan("bottom").steiner(as_view(grid), [0, 8])
    top, bottom = assembly.solve()
    assert top.sorted_edges() == [(0, 1), (1, 2), (2, 5), (5, 8)]
    assert bottom.is_tree()
    assert not (bottom.vertices - {0, 8}) & {1, 2, 5}


def test_vertex_conflict(grid):
    assembly = TreeAssembly(grid, [0, 8])
    assembly.plan("a").path([0, 1, 4])
    assembly.plan("b").path([4, 7, 8])
    with pytest.raises(AssemblyConflictError, match="claimed"):
        assembly.solve()


def test_edge_conflict_between_terminals(grid):
    assembly = TreeAssembly(grid, [0, 1])
    assembly.plan("a").edge(0, 1)
    assembly.plan("b").edge(1, 0)
    with pytest.raises(AssemblyConflictError, match="edge"):
        assembly.solve()


def test_non_edge_rejected(grid):
    assembly = TreeAssembly(grid, [0, 8])
    assembly.plan("a").edge(0, 8)
    with pytest.raises(AssemblyConflictError, match="non-edge"):
        assembly.solve()


def test_unsatisfiable_request(grid):
    assembly = TreeAssembly(grid, [0, 8])
    assembly.plan("a").path([0, 1, 2, 5, 8])
    assembly.plan("b").path([0, 3, 6, 7, 8])
    assembly.plan("c").steiner(as_view(grid), [0, 8])
    with pytest.raises(AssemblyConflictError, match="c:"):
        assembly.solve()


def test_union_of_overlapping_paths_is_reduced_to_tree(grid):
    assembly = TreeAssembly(grid, [0, 4])
    assembly.plan("a").path([0, 1, 4]).path([0, 3, 4])
    (tree,) = assembly.solve()
    assert tree.is_tree()
    assert {0, 4} <= tree.vertices
