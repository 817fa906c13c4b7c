"""
Packing internally disjoint Steiner trees.

`find_packing` looks for ``t`` trees containing the terminal set that pairwise
share only the terminals and no edges. It tries cheap greedy packings first and
falls back to an exact branch-and-bound search that either returns a packing or
proves that none exists.

The exact search labels every non-terminal vertex with the tree it joins (or
none) and every terminal-terminal edge with the tree that owns it. Tree ``i``
then owns every edge whose non-terminal ends carry label ``i``, so edge
disjointness is automatic and a labelling is a packing as soon as every tree's
owned subgraph connects the terminals. Trees are grown one at a time from the
smallest terminal through include/exclude branching on the frontier of the
grown component, nearest-to-a-missing-terminal first. Trees are ordered by the
smallest terminal edge they use, which removes the t! relabelings. A branch is
cut when some tree's still-possible subgraph disconnects the terminals or when
a terminal has fewer free edges than trees still missing an edge there.
"""

from collections import deque
from collections.abc import Iterable, Sequence
from typing import Any

from attrs import define, field

from godan_idst.config import settings
from godan_idst.core.connectivity import steiner_tree
from godan_idst.core.exceptions import (
    DisconnectedTerminalsError,
    SearchBudgetExceeded,
    VertexAbsentError,
)
from godan_idst.core.graphs import GraphLike, as_view
from godan_idst.core.trees import Tree, spanning_tree
from godan_idst.utils.logging import get_logger
from godan_idst.utils.telemetry import telemetry

logger = get_logger(__name__)

FREE = -1


@define(frozen=True)
class PackingOutcome:
    """
    Result of one packing attempt.

    Attributes:
        trees (tuple[Tree, ...] | None): The packing, or None when none exists.
        explored (int): Search nodes visited by the exact search.
        method (str): ``trivial``, ``bound``, ``greedy`` or ``exact``.
    """

    trees: tuple[Tree, ...] | None = field(
        converter=lambda value: None if value is None else tuple(value)
    )
    explored: int = 0
    method: str = "exact"

    @property
    def feasible(self) -> bool:
        return self.trees is not None


def leaf_bound_excludes(view: GraphLike, terminals: Sequence[Any], t: int) -> bool:
    """
    True when a packing of ``t`` trees is impossible for degree reasons.

    Every tree needs an edge at every terminal, so ``t`` cannot exceed a
    terminal's degree; when two adjacent terminals both have degree exactly ``t``
    each is a leaf in every tree and the tree holding their common edge is that
    edge alone, which cannot reach a third terminal.
    """
    degrees = {s: len(view.neighbors(s)) for s in terminals}
    if t > min(degrees.values()):
        return True
    if len(terminals) < 3:  # noqa: PLR2004
        return False
    tight = [s for s in terminals if degrees[s] == t]
    return any(v in view.neighbors(u) for i, u in enumerate(tight) for v in tight[i + 1 :])


def greedy_packing(view: GraphLike, terminals: Iterable[Any], t: int) -> list[Tree] | None:
    """Sequential Steiner trees, each avoiding what earlier trees used."""
    base = as_view(view)
    terminal_set = frozenset(terminals)
    for through in (False, True):
        trees: list[Tree] = []
        used_vertices: set[Any] = set()
        used_edges: set[Any] = set()
        for _ in range(t):
            try:
                tree = steiner_tree(
                    base.without(*used_vertices),
                    terminal_set,
                    avoid_edges=used_edges,
                    through_terminals=through,
                )
            except DisconnectedTerminalsError:
                break
            trees.append(tree)
            used_vertices |= tree.vertices - terminal_set
            used_edges |= tree.edges
        if len(trees) == t:
            return trees
    return None


class ExactPacking:
    """
    Exact search for ``t`` internally disjoint S-trees in a view.

    Call `run`; it returns the trees or None after exhausting the search space,
    and raises `SearchBudgetExceeded` when ``node_budget`` nodes were visited.
    """

    def __init__(
        self,
        view: GraphLike,
        terminals: Iterable[Any],
        t: int,
        node_budget: int | None = None,
    ) -> None:
        self.view = view
        self.t = t
        self.node_budget = node_budget or int(settings.SEARCH.NODE_BUDGET)
        self.explored = 0

        self.vertices = list(view.vertices())
        self.index = {v: i for i, v in enumerate(self.vertices)}
        terminal_list = sorted(set(terminals))
        for s in terminal_list:
            if s not in self.index:
                raise VertexAbsentError(f"terminal {s} is not present in the view")
        self.terms = [self.index[s] for s in terminal_list]
        self.is_terminal = [False] * len(self.vertices)
        for s in self.terms:
            self.is_terminal[s] = True
        self.adj = [[self.index[w] for w in view.neighbors(v)] for v in self.vertices]

        # terminal-terminal edges get their own labels
        self.tt_edges: list[tuple[int, int]] = []
        self.tt_id: dict[tuple[int, int], int] = {}
        for s in self.terms:
            for w in self.adj[s]:
                if self.is_terminal[w] and s < w:
                    self.tt_id[(s, w)] = len(self.tt_edges)
                    self.tt_edges.append((s, w))

        self.label = [FREE] * len(self.vertices)
        self.forbid = [0] * len(self.vertices)
        self.tt_label = [FREE] * len(self.tt_edges)
        self.tt_forbid = [0] * len(self.tt_edges)
        self.trail: list[tuple[list[int], int, int]] = []

        self.root = self.terms[0]
        self.root_edges = [self._slot(self.root, w) for w in self.adj[self.root]]

    # ---- edge slots: ("v", vertex) or ("e", tt edge id) ----

    def _slot(self, s: int, w: int) -> tuple[str, int]:
        if self.is_terminal[w]:
            return ("e", self.tt_id[(min(s, w), max(s, w))])
        return ("v", w)

    def _slot_owner(self, slot: tuple[str, int]) -> int:
        kind, i = slot
        return self.label[i] if kind == "v" else self.tt_label[i]

    def _slot_open(self, slot: tuple[str, int], tree: int) -> bool:
        kind, i = slot
        bit = 1 << tree
        if kind == "v":
            return self.label[i] == FREE and not self.forbid[i] & bit
        return self.tt_label[i] == FREE and not self.tt_forbid[i] & bit

    def _include(self, slot: tuple[str, int], tree: int) -> tuple[list[int], int, int]:
        kind, i = slot
        return (self.label, i, tree) if kind == "v" else (self.tt_label, i, tree)

    def _exclude(self, slot: tuple[str, int], tree: int) -> tuple[list[int], int, int]:
        kind, i = slot
        if kind == "v":
            return (self.forbid, i, self.forbid[i] | (1 << tree))
        return (self.tt_forbid, i, self.tt_forbid[i] | (1 << tree))

    def _apply(self, actions: list[tuple[list[int], int, int]]) -> None:
        for array, i, value in actions:
            self.trail.append((array, i, array[i]))
            array[i] = value

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            array, i, old = self.trail.pop()
            array[i] = old

    # ---- graph views of the current state ----

    def _edge_state(self, u: int, w: int, tree: int, potential: bool) -> bool:
        """Whether tree owns (committed) or may still own (potential) edge uw."""
        bit = 1 << tree
        for end in (u, w):
            if self.is_terminal[end]:
                continue
            if self.label[end] == tree:
                continue
            if potential and self.label[end] == FREE and not self.forbid[end] & bit:
                continue
            return False
        if self.is_terminal[u] and self.is_terminal[w]:
            e = self.tt_id[(min(u, w), max(u, w))]
            if self.tt_label[e] == tree:
                return True
            return potential and self.tt_label[e] == FREE and not self.tt_forbid[e] & bit
        return True

    def _component(self, tree: int, potential: bool) -> set[int]:
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in seen and self._edge_state(u, w, tree, potential):
                    seen.add(w)
                    queue.append(w)
        return seen

    def _alive(self) -> bool:
        terms = self.terms
        for tree in range(self.t):
            reach = self._component(tree, potential=True)
            if any(s not in reach for s in terms):
                return False
        for s in terms:
            needy = 0
            for tree in range(self.t):
                if not any(self._edge_state(s, w, tree, False) for w in self.adj[s]):
                    needy |= 1 << tree
            if not needy:
                continue
            supply = 0
            for w in self.adj[s]:
                slot = self._slot(s, w)
                kind, i = slot
                if kind == "v":
                    if self.label[i] == FREE and needy & ~self.forbid[i]:
                        supply += 1
                elif self.tt_label[i] == FREE and needy & ~self.tt_forbid[i]:
                    supply += 1
            if supply < needy.bit_count():
                return False
        return True

    def _anchor(self, tree: int) -> int | None:
        owned = [j for j, slot in enumerate(self.root_edges) if self._slot_owner(slot) == tree]
        return min(owned) if owned else None

    def _decide(self) -> tuple[list[Any], list[Any]] | None:
        """The include/exclude action pair for the next branch, or None when solved."""
        for tree in range(self.t):
            component = self._component(tree, potential=False)
            if all(s in component for s in self.terms):
                continue
            anchor = self._anchor(tree)
            if anchor is None:
                floor = self._anchor(tree - 1) if tree else -1
                floor = -1 if floor is None else floor
                for j, slot in enumerate(self.root_edges):
                    if j > floor and self._slot_open(slot, tree):
                        below = [
                            self._exclude(other, tree)
                            for other in self.root_edges[:j]
                            if self._slot_open(other, tree)
                        ]
                        return [self._include(slot, tree), *below], [self._exclude(slot, tree)]
                return [], []
            return self._grow(tree, component)
        return None

    def _grow(self, tree: int, component: set[int]) -> tuple[list[Any], list[Any]]:
        missing = [s for s in self.terms if s not in component]
        # BFS distance from the missing terminals through the potential graph
        dist = {s: 0 for s in missing}
        queue = deque(missing)
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in dist and self._edge_state(u, w, tree, potential=True):
                    dist[w] = dist[u] + 1
                    queue.append(w)
        best: tuple[int, int, int] | None = None
        best_slot: tuple[str, int] | None = None
        for u in sorted(component):
            for w in self.adj[u]:
                if w in component:
                    continue
                if self.is_terminal[w] and not self.is_terminal[u]:
                    continue
                slot = self._slot(u, w)
                if not self._slot_open(slot, tree):
                    continue
                key = (dist.get(w, len(self.vertices)), 0 if slot[0] == "e" else 1, slot[1])
                if best is None or key < best:
                    best, best_slot = key, slot
        if best_slot is None:
            return [], []
        return [self._include(best_slot, tree)], [self._exclude(best_slot, tree)]

    def _solution(self) -> list[Tree]:
        trees = []
        keep = [self.vertices[s] for s in self.terms]
        for tree in range(self.t):
            members = self._component(tree, potential=False)
            edges = [
                (self.vertices[u], self.vertices[w])
                for u in members
                for w in self.adj[u]
                if u < w and w in members and self._edge_state(u, w, tree, False)
            ]
            subgraph = Tree.from_edges(edges, [self.vertices[v] for v in members])
            trees.append(spanning_tree(subgraph, keep))
        return trees

    def run(self) -> list[Tree] | None:
        if self.t == 0:
            return []
        stack: list[tuple[int, list[Any] | None]] = []
        while True:
            self.explored += 1
            if self.explored > self.node_budget:
                raise SearchBudgetExceeded(
                    f"packing search exceeded {self.node_budget} nodes", explored=self.explored
                )
            decision = self._decide() if self._alive() else ([], [])
            if decision is None:
                return self._solution()
            include, exclude = decision
            if include:
                stack.append((len(self.trail), exclude))
                self._apply(include)
                continue
            # dead end: backtrack to the nearest unexplored alternative
            while stack:
                mark, alternative = stack.pop()
                self._undo(mark)
                if alternative is not None:
                    stack.append((mark, None))
                    self._apply(alternative)
                    break
            else:
                return None


def find_packing(
    view: GraphLike,
    terminals: Iterable[Any],
    t: int,
    *,
    node_budget: int | None = None,
    greedy: bool = True,
) -> PackingOutcome:
    """
    Find ``t`` internally disjoint trees for the terminals, or prove there are none.

    Args:
        view: The graph to pack in.
        terminals: The terminal set (at least one vertex).
        t: Number of trees wanted.
        node_budget: Exact-search node limit; defaults to ``SEARCH.NODE_BUDGET``.
        greedy: Try the greedy packings before the exact search.

    Returns:
        PackingOutcome: ``trees`` is None exactly when no packing exists.
    """
    terminal_list = sorted(set(terminals))
    if t == 0:
        return PackingOutcome([], 0, "trivial")
    if len(terminal_list) == 1:
        return PackingOutcome([Tree.single(terminal_list[0])] * t, 0, "trivial")
    if leaf_bound_excludes(view, terminal_list, t):
        return PackingOutcome(None, 0, "bound")
    if greedy:
        trees = greedy_packing(view, terminal_list, t)
        if trees is not None:
            return PackingOutcome(trees, 0, "greedy")
    search = ExactPacking(view, terminal_list, t, node_budget=node_budget)
    with telemetry.span("packing.search", {"t": t, "terminals": len(terminal_list)}):
        try:
            trees = search.run()
        finally:
            telemetry.get_histogram("packing.nodes").record(search.explored)
    logger.debug(
        "exact packing finished",
        t=t,
        feasible=trees is not None,
        explored=search.explored,
    )
    return PackingOutcome(trees, search.explored, "exact")
