"""
Trees as vertex and edge sets.

Constructions build trees by taking unions of paths and smaller trees, so a tree
is stored as plain sets; repeated vertices collapse naturally. `spanning_tree`
turns any connected union back into a tree that still contains the terminals.
"""

from collections.abc import Callable, Iterable
from typing import Any

import networkx as nx
from attrs import define, field

from godan_idst.core.exceptions import DisconnectedTerminalsError
from godan_idst.core.graphs import Edge, edge


def _edge_set(edges: Iterable[Edge]) -> frozenset[Edge]:
    return frozenset(edge(u, v) for u, v in edges)


@define(frozen=True)
class Tree:
    """
    A subgraph given by its vertices and canonical edges.

    Attributes:
        vertices (frozenset): Every vertex of the subgraph, including isolated ones.
        edges (frozenset[Edge]): Sorted ``(u, v)`` pairs.
    """

    vertices: frozenset[Any] = field(converter=frozenset)
    edges: frozenset[Edge] = field(converter=_edge_set)

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], vertices: Iterable[Any] = ()) -> "Tree":
        edge_set = _edge_set(edges)
        found = set(vertices)
        for u, v in edge_set:
            found.add(u)
            found.add(v)
        return cls(frozenset(found), edge_set)

    @classmethod
    def single(cls, v: Any) -> "Tree":
        return cls(frozenset({v}), frozenset())

    @classmethod
    def from_path(cls, path: Iterable[Any]) -> "Tree":
        vertices = list(path)
        return cls.from_edges(zip(vertices, vertices[1:], strict=False), vertices)

    def __len__(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency(self) -> dict[Any, list[Any]]:
        adjacency: dict[Any, list[Any]] = {v: [] for v in self.vertices}
        for u, v in sorted(self.edges):
            adjacency[u].append(v)
            adjacency[v].append(u)
        return adjacency

    def degree(self, v: Any) -> int:
        return sum(1 for e in self.edges if v in e)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def is_connected(self) -> bool:
        return bool(self.vertices) and nx.is_connected(self.graph())

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def union(self, *others: "Tree") -> "Tree":
        vertices = set(self.vertices)
        edges = set(self.edges)
        for other in others:
            vertices |= other.vertices
            edges |= other.edges
        return Tree(frozenset(vertices), frozenset(edges))

    def map(self, fn: Callable[[Any], Any]) -> "Tree":
        """Apply a vertex bijection."""
        return Tree.from_edges(
            ((fn(u), fn(v)) for u, v in self.edges), (fn(v) for v in self.vertices)
        )

    def path_between(self, source: Any, target: Any) -> list[Any]:
        """The unique source-target path inside the tree."""
        try:
            return list(nx.shortest_path(self.graph(), source, target))
        except (nx.NetworkXNoPath, nx.NodeNotFound) as exc:
            raise DisconnectedTerminalsError(f"{source} and {target} are not connected") from exc


def union_of(pieces: Iterable[Tree]) -> Tree:
    items = list(pieces)
    if not items:
        return Tree(frozenset(), frozenset())
    return items[0].union(*items[1:])


def prune_leaves(tree: Tree, keep: Iterable[Any]) -> Tree:
    """Repeatedly drop leaves that are not in ``keep``."""
    keep_set = set(keep)
    g = tree.graph()
    leaves = [v for v in g if g.degree(v) <= 1 and v not in keep_set]
    while leaves:
        neighbors = {w for v in leaves for w in g[v]}
        g.remove_nodes_from(leaves)
        leaves = [w for w in neighbors if w in g and g.degree(w) <= 1 and w not in keep_set]
    return Tree.from_edges(g.edges, g.nodes)


def spanning_tree(subgraph: Tree, keep: Iterable[Any]) -> Tree:
    """
    Reduce a connected subgraph to a tree containing ``keep``.

    The BFS tree is rooted at the smallest kept vertex; non-kept leaves are pruned.
    Raises `DisconnectedTerminalsError` when some kept vertex is unreachable.
    """
    keep_set = set(keep)
    if not keep_set:
        raise DisconnectedTerminalsError("spanning_tree needs at least one vertex to keep")
    missing = keep_set - subgraph.vertices
    if missing:
        raise DisconnectedTerminalsError(f"vertices {sorted(missing)} are not in the subgraph")
    bfs = nx.bfs_tree(subgraph.graph(), min(keep_set))
    unreachable = keep_set - set(bfs)
    if unreachable:
        raise DisconnectedTerminalsError(f"vertices {sorted(unreachable)} are not connected")
    return prune_leaves(Tree.from_edges(bfs.edges, bfs.nodes), keep_set)
