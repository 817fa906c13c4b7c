"""
Set-based assembly of a family of S-trees.

A construction describes each tree as fixed pieces (edges and paths whose
vertices are known up front) plus Steiner requests ("some tree in this region
containing these vertices"). `TreeAssembly.solve` checks that fixed pieces of
different trees never share a non-terminal vertex or an edge, then answers the
Steiner requests in plan order, each inside its region minus everything the
other plans hold. Each plan's union is finally reduced to a tree keeping the
terminals, which removes the cycles created when paths coincide.
"""

from collections.abc import Iterable, Sequence
from typing import Any

from attrs import define, field

from godan_idst.core.connectivity import steiner_tree
from godan_idst.core.exceptions import (
    AssemblyConflictError,
    DisconnectedTerminalsError,
    VertexAbsentError,
)
from godan_idst.core.graphs import Edge, GraphLike, SubgraphView, as_view, edge
from godan_idst.core.trees import Tree, spanning_tree
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)


@define
class SteinerRequest:
    region: SubgraphView
    terminals: frozenset[Any] = field(converter=frozenset)


@define
class TreePlan:
    """
    The pieces of one tree.

    Methods return the plan so pieces can be chained.
    """

    label: str
    edges: set[Edge] = field(factory=set)
    vertices: set[Any] = field(factory=set)
    requests: list[SteinerRequest] = field(factory=list)

    def edge(self, u: Any, v: Any) -> "TreePlan":
        self.edges.add(edge(u, v))
        self.vertices.update((u, v))
        return self

    def path(self, vertices: Sequence[Any]) -> "TreePlan":
        self.vertices.update(vertices)
        for u, v in zip(vertices, vertices[1:], strict=False):
            self.edges.add(edge(u, v))
        return self

    def tree(self, tree: Tree) -> "TreePlan":
        self.vertices.update(tree.vertices)
        self.edges.update(tree.edges)
        return self

    def steiner(self, region: GraphLike, terminals: Iterable[Any]) -> "TreePlan":
        request = SteinerRequest(as_view(region), terminals)
        self.vertices.update(request.terminals)
        self.requests.append(request)
        return self


class TreeAssembly:
    """
    Collects `TreePlan`s for one terminal set and turns them into trees.

    Raises `AssemblyConflictError` from `solve` when plans collide, use a
    non-edge, or leave a Steiner request unsatisfiable.
    """

    def __init__(self, graph: GraphLike, terminals: Iterable[Any]) -> None:
        self.graph = graph
        self.terminals = frozenset(terminals)
        self.plans: list[TreePlan] = []

    def plan(self, label: str) -> TreePlan:
        plan = TreePlan(label)
        self.plans.append(plan)
        return plan

    def _claims(self) -> dict[Any, int]:
        owner: dict[Any, int] = {}
        for index, plan in enumerate(self.plans):
            for v in plan.vertices:
                if v in self.terminals:
                    continue
                if owner.setdefault(v, index) != index:
                    raise AssemblyConflictError(
                        f"{v} is claimed by {self.plans[owner[v]].label} and {plan.label}"
                    )
        return owner

    def _check_edges(self) -> dict[Edge, int]:
        owner: dict[Edge, int] = {}
        for index, plan in enumerate(self.plans):
            for u, v in plan.edges:
                if not self.graph.has_vertex(u) or not self.graph.has_vertex(v):
                    raise AssemblyConflictError(f"{plan.label} uses a vertex outside the graph")
                if v not in self.graph.neighbors(u):
                    raise AssemblyConflictError(f"{plan.label} uses non-edge {u}-{v}")
                if owner.setdefault((u, v), index) != index:
                    first = self.plans[owner[(u, v)]].label
                    raise AssemblyConflictError(
                        f"edge {u}-{v} is used by {first} and {plan.label}"
                    )
        return owner

    def solve(self) -> list[Tree]:
        vertex_owner = self._claims()
        edge_owner = self._check_edges()
        for index, plan in enumerate(self.plans):
            for request in plan.requests:
                blocked = [v for v, o in vertex_owner.items() if o != index]
                avoid = [e for e, o in edge_owner.items() if o != index]
                try:
                    found = steiner_tree(request.region.without(*blocked), request.terminals, avoid)
                except (DisconnectedTerminalsError, VertexAbsentError) as exc:
                    raise AssemblyConflictError(f"{plan.label}: {exc}") from exc
                for v in found.vertices - self.terminals:
                    vertex_owner[v] = index
                for e in found.edges:
                    if edge_owner.setdefault(e, index) != index:
                        raise AssemblyConflictError(f"{plan.label} reuses edge {e}")
                plan.tree(found)
        trees = []
        for plan in self.plans:
            try:
                subgraph = Tree.from_edges(plan.edges, plan.vertices)
                trees.append(spanning_tree(subgraph, self.terminals))
            except DisconnectedTerminalsError as exc:
                raise AssemblyConflictError(f"{plan.label} does not connect S: {exc}") from exc
        logger.debug("assembled trees", plans=[p.label for p in self.plans])
        return trees
