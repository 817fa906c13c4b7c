"""
Menger-type path primitives and Steiner trees inside subgraph views.

Disjoint path families come from unit vertex capacities on the split-vertex
digraph: every vertex ``v`` becomes ``(v, IN) -> (v, OUT)`` with capacity 1 and
every undirected edge ``uv`` becomes ``(u, OUT) -> (v, IN)`` and back. Nodes are
inserted in rank order and neighbors in sorted order, so Edmonds-Karp's BFS
breaks ties by the smallest rank and results are reproducible.
"""

from collections import deque
from collections.abc import Callable, Iterable, Iterator
from enum import StrEnum
from typing import Any

import networkx as nx
from attrs import define, field
from networkx.algorithms.flow import edmonds_karp

from godan_idst.core.exceptions import (
    AdjacentPairError,
    ConnectivityError,
    DisconnectedTerminalsError,
    GraphSizeError,
    InsufficientPathsError,
    NonDistinctVerticesError,
    VertexAbsentError,
)
from godan_idst.core.graphs import Edge, GraphLike, edge, to_networkx
from godan_idst.core.trees import Tree, prune_leaves
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)

IN = 0
OUT = 1
SOURCE = ("source",)
SINK = ("sink",)


class PathKind(StrEnum):
    """Which disjointness a `PathFamily` promises."""

    INTERNALLY_DISJOINT = "pairwise-internally-disjoint"
    FAN = "fan"
    SET_DISJOINT = "set-disjoint"


def _as_paths(paths: Iterable[Iterable[Any]]) -> tuple[tuple[Any, ...], ...]:
    return tuple(tuple(p) for p in paths)


@define(frozen=True)
class PathFamily:
    """
    Paths returned by the Menger, fan and (X,Y) primitives.

    Attributes:
        kind (PathKind): The disjointness guarantee.
        paths (tuple[tuple, ...]): Vertex sequences, shortest first.
    """

    kind: PathKind
    paths: tuple[tuple[Any, ...], ...] = field(converter=_as_paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self) -> Iterator[tuple[Any, ...]]:
        return iter(self.paths)

    def __getitem__(self, index: int) -> tuple[Any, ...]:
        return self.paths[index]

    def endpoints(self) -> list[Any]:
        return [p[-1] for p in self.paths]

    def trees(self) -> list[Tree]:
        return [Tree.from_path(p) for p in self.paths]


def _require_present(view: GraphLike, *vertices: Any) -> None:
    for v in vertices:
        if not view.has_vertex(v):
            raise VertexAbsentError(f"{v} is not present in the view")


def _split_network(
    view: GraphLike,
    pass_through: Callable[[Any], bool],
    direct: tuple[Any, Any] | None = None,
) -> nx.DiGraph:
    vertices = view.vertices()
    big = len(vertices) + 1
    network = nx.DiGraph()
    for v in vertices:
        network.add_node((v, IN))
        network.add_node((v, OUT))
    for v in vertices:
        if pass_through(v):
            network.add_edge((v, IN), (v, OUT), capacity=1)
    for u in vertices:
        for w in view.neighbors(u):
            capacity = 1 if direct is not None and (u, w) == direct else big
            network.add_edge((u, OUT), (w, IN), capacity=capacity)
    return network


def _max_flow_paths(
    network: nx.DiGraph, source: Any, sink: Any
) -> tuple[list[list[Any]], set[Any]]:
    """
    Run Edmonds-Karp and decompose the flow into simple node paths.

    Returns:
        tuple: The node paths and the source side of a minimum cut.
    """
    residual = edmonds_karp(network, source, sink, capacity="capacity")
    value = int(residual.graph["flow_value"])

    successors: dict[Any, deque[Any]] = {}
    for u, v in network.edges():
        flow = int(residual[u][v]["flow"])
        if flow > 0:
            successors.setdefault(u, deque()).extend([v] * flow)

    paths = []
    for _ in range(value):
        path = [source]
        index = {source: 0}
        while path[-1] != sink:
            nxt = successors[path[-1]].popleft()
            if nxt in index:
                # cancel the circulation just walked
                cut_at = index[nxt]
                for dropped in path[cut_at + 1 :]:
                    del index[dropped]
                path = path[: cut_at + 1]
            else:
                index[nxt] = len(path)
                path.append(nxt)
        paths.append(path)

    open_arcs = nx.DiGraph()
    open_arcs.add_node(source)
    open_arcs.add_edges_from(
        (u, v) for u, v, attrs in residual.edges(data=True) if attrs["capacity"] - attrs["flow"] > 0
    )
    return paths, {source} | nx.descendants(open_arcs, source)


def _vertex_path(nodes: list[Any]) -> tuple[Any, ...]:
    vertices: list[Any] = []
    for node in nodes:
        if node in (SOURCE, SINK):
            continue
        v = node[0]
        if not vertices or vertices[-1] != v:
            vertices.append(v)
    return tuple(vertices)


def _cut_of(reach: set[Any], view: GraphLike) -> frozenset[Any]:
    return frozenset(
        v for v in view.vertices() if (v, IN) in reach and (v, OUT) not in reach
    )


def _ordered(paths: Iterable[tuple[Any, ...]]) -> list[tuple[Any, ...]]:
    return sorted(paths, key=lambda p: (len(p), p))


def max_internally_disjoint_paths(
    view: GraphLike, x: Any, y: Any
) -> tuple[PathFamily, frozenset[Any] | None]:
    """
    A maximum family of internally disjoint x-y paths.

    Returns:
        tuple: The family and, for non-adjacent pairs, a minimum x-y vertex cut.
    """
    _require_present(view, x, y)
    if x == y:
        raise NonDistinctVerticesError("path endpoints must differ")
    adjacent = y in view.neighbors(x)
    network = _split_network(
        view, pass_through=lambda v: v not in (x, y), direct=(x, y) if adjacent else None
    )
    node_paths, reach = _max_flow_paths(network, (x, OUT), (y, IN))
    family = PathFamily(
        PathKind.INTERNALLY_DISJOINT, _ordered(_vertex_path(p) for p in node_paths)
    )
    return family, None if adjacent else _cut_of(reach, view)


def internally_disjoint_paths(view: GraphLike, x: Any, y: Any, k: int) -> PathFamily:
    """
    ``k`` x-y paths sharing only their endpoints.

    An adjacent pair counts its direct edge as one path. When fewer than ``k``
    paths exist, `InsufficientPathsError` carries the maximum family and the
    certifying cut.
    """
    family, cut = max_internally_disjoint_paths(view, x, y)
    if len(family) < k:
        raise InsufficientPathsError(
            f"only {len(family)} internally disjoint paths between {x} and {y}, wanted {k}",
            found=len(family),
            requested=k,
            cut=cut,
            paths=family.paths,
        )
    return PathFamily(family.kind, family.paths[:k])


def local_connectivity(view: GraphLike, x: Any, y: Any) -> int:
    """The maximum number of internally disjoint x-y paths."""
    family, _ = max_internally_disjoint_paths(view, x, y)
    return len(family)


def min_vertex_cut(view: GraphLike, x: Any, y: Any) -> frozenset[Any]:
    """A minimum set of vertices separating two non-adjacent vertices."""
    _require_present(view, x, y)
    if x == y:
        raise NonDistinctVerticesError("cut endpoints must differ")
    if y in view.neighbors(x):
        raise AdjacentPairError(f"no vertex cut separates adjacent {x} and {y}")
    _, cut = max_internally_disjoint_paths(view, x, y)
    assert cut is not None
    return cut


def is_connected(view: GraphLike) -> bool:
    return bool(view.vertices()) and nx.is_connected(to_networkx(view))


def vertex_connectivity(view: GraphLike) -> int:
    """
    κ of the view: the minimum cut over non-adjacent pairs, |V| - 1 for complete graphs.

    Pairs are enumerated Even-style: only pairs whose first vertex is among the
    first κ + 1 vertices need a flow computation.
    """
    vertices = view.vertices()
    if len(vertices) < 2:  # noqa: PLR2004
        raise GraphSizeError("vertex connectivity needs at least two vertices")
    if not is_connected(view):
        return 0
    best = len(vertices) - 1
    i = 0
    while i <= best and i < len(vertices):
        u = vertices[i]
        nbrs = set(view.neighbors(u))
        for v in vertices[i + 1 :]:
            if v in nbrs:
                continue
            best = min(best, local_connectivity(view, u, v))
        i += 1
    logger.debug("vertex connectivity computed", value=best, vertices=len(vertices))
    return best


def k_fan(view: GraphLike, x: Any, targets: Iterable[Any], k: int) -> PathFamily:
    """
    ``k`` paths from ``x`` to distinct vertices of ``targets``.

    The paths share only ``x`` and meet ``targets`` only at their last vertex.
    """
    _require_present(view, x)
    target_set = {y for y in targets if view.has_vertex(y)}
    if x in target_set:
        raise ConnectivityError("fan source must not be a target")
    if len(target_set) < k:
        raise InsufficientPathsError(
            f"only {len(target_set)} fan targets present, wanted {k}",
            found=len(target_set),
            requested=k,
        )
    network = _split_network(view, pass_through=lambda v: v != x and v not in target_set)
    for y in sorted(target_set):
        network.add_edge((y, IN), SINK, capacity=1)
    node_paths, _ = _max_flow_paths(network, (x, OUT), SINK)
    paths = _ordered(_vertex_path(p) for p in node_paths)
    if len(paths) < k:
        raise InsufficientPathsError(
            f"only a {len(paths)}-fan from {x}, wanted {k}",
            found=len(paths),
            requested=k,
            paths=paths,
        )
    return PathFamily(PathKind.FAN, paths[:k])


def _trim(path: tuple[Any, ...], sources: set[Any], sinks: set[Any]) -> tuple[Any, ...]:
    start = max(i for i, v in enumerate(path) if v in sources)
    end = next(j for j in range(start, len(path)) if path[j] in sinks)
    return path[start : end + 1]


def disjoint_set_paths(
    view: GraphLike, sources: Iterable[Any], sinks: Iterable[Any], k: int
) -> PathFamily:
    """
    ``k`` pairwise vertex-disjoint (X, Y)-paths.

    Each path starts in X, ends in Y and has no other vertex in X ∪ Y; a vertex
    of X ∩ Y is a path of length zero.
    """
    source_set = {v for v in sources if view.has_vertex(v)}
    sink_set = {v for v in sinks if view.has_vertex(v)}
    if min(len(source_set), len(sink_set)) < k:
        raise InsufficientPathsError(
            f"set paths need |X|, |Y| >= {k}",
            found=min(len(source_set), len(sink_set)),
            requested=k,
        )
    network = _split_network(view, pass_through=lambda v: True)
    for v in sorted(source_set):
        network.add_edge(SOURCE, (v, IN), capacity=1)
    for v in sorted(sink_set):
        network.add_edge((v, OUT), SINK, capacity=1)
    node_paths, _ = _max_flow_paths(network, SOURCE, SINK)
    paths = _ordered(_trim(_vertex_path(p), source_set, sink_set) for p in node_paths)
    if len(paths) < k:
        raise InsufficientPathsError(
            f"only {len(paths)} disjoint (X,Y)-paths, wanted {k}",
            found=len(paths),
            requested=k,
            paths=paths,
        )
    return PathFamily(PathKind.SET_DISJOINT, paths[:k])


def family_is_valid(view: GraphLike, family: PathFamily) -> bool:
    """Check adjacency along every path and the kind-specific disjointness."""
    for path in family:
        if not path or len(set(path)) != len(path):
            return False
        if any(not view.has_vertex(v) for v in path):
            return False
        if any(b not in view.neighbors(a) for a, b in zip(path, path[1:], strict=False)):
            return False
    if family.kind is PathKind.SET_DISJOINT:
        seen: set[Any] = set()
        for path in family:
            if seen & set(path):
                return False
            seen |= set(path)
        return True
    internal: set[Any] = set()
    for path in family:
        inner = set(path[1:-1])
        if internal & inner:
            return False
        internal |= inner
    if family.kind is PathKind.INTERNALLY_DISJOINT:
        ends = {(p[0], p[-1]) for p in family}
        if len(ends) > 1 or internal & {v for pair in ends for v in pair}:
            return False
        return len({p for p in family}) == len(family)
    starts = {p[0] for p in family}
    finals = [p[-1] for p in family]
    return len(starts) == 1 and len(set(finals)) == len(finals) and not internal & set(finals)


def steiner_tree(
    view: GraphLike,
    terminals: Iterable[Any],
    avoid_edges: Iterable[Edge] = (),
    *,
    through_terminals: bool = True,
) -> Tree:
    """
    A tree of the view containing every terminal.

    Starting from the smallest terminal, the nearest remaining terminal is attached
    by a BFS shortest path until all are connected; non-terminal leaves are pruned.
    Edges in ``avoid_edges`` are never used. With ``through_terminals=False`` the
    search does not route through terminals once the tree has a non-terminal
    vertex, which keeps terminal degrees low for later trees of a packing.
    """
    ordered = sorted(set(terminals))
    if not ordered:
        raise DisconnectedTerminalsError("a Steiner tree needs at least one terminal")
    _require_present(view, *ordered)
    terminal_set = set(ordered)
    avoid = {edge(u, v) for u, v in avoid_edges}
    in_tree = {ordered[0]}
    edges: list[Edge] = []
    remaining = set(ordered[1:])
    while remaining:
        sources = sorted(in_tree)
        if not through_terminals:
            sources = [v for v in sources if v not in terminal_set] or sources
        parent: dict[Any, Any] = {v: None for v in in_tree}
        queue = deque(sources)
        hit = None
        while queue and hit is None:
            u = queue.popleft()
            for w in view.neighbors(u):
                if w in parent or edge(u, w) in avoid:
                    continue
                parent[w] = u
                if w in remaining:
                    hit = w
                    break
                if through_terminals or w not in terminal_set:
                    queue.append(w)
        if hit is None:
            raise DisconnectedTerminalsError(
                f"terminals {sorted(remaining)} are not connected to {ordered[0]}"
            )
        v = hit
        while v not in in_tree:
            u = parent[v]
            edges.append((u, v))
            in_tree.add(v)
            remaining.discard(v)
            v = u
    return prune_leaves(Tree.from_edges(edges, in_tree), ordered)
