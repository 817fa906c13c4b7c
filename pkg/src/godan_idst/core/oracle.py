"""
Exact ground truth at desk scale.

`kappa_S_exact` finds the largest packing of internally disjoint S-trees by
iterative deepening over `find_packing`; `kappa_k_exact` minimizes it over all
(or sampled) k-subsets. `whitney_kappa` is the pairwise definition of κ(G),
kept separate from `vertex_connectivity` so the two can be compared.
"""

import itertools
import random
from collections.abc import Iterable, Iterator, Sequence
from typing import Any

from godan_idst.config import settings
from godan_idst.core.connectivity import local_connectivity
from godan_idst.core.exceptions import (
    GraphSizeError,
    NonDistinctVerticesError,
    SearchBudgetExceeded,
    VertexAbsentError,
)
from godan_idst.core.graphs import GodanGraph, GraphLike, as_view, pairs
from godan_idst.core.packing import find_packing
from godan_idst.core.trees import Tree
from godan_idst.dto.models import DescentResult, KappaResult, PackingResult
from godan_idst.utils.logging import get_logger
from godan_idst.utils.telemetry import telemetry

logger = get_logger(__name__)

WARM_START_SIZE = 4


def graph_label(graph: GraphLike) -> str:
    n = getattr(graph, "n", None)
    name = getattr(graph, "name", type(graph).__name__)
    return f"{name}_{n}" if n is not None else str(name)


def min_degree(graph: GraphLike) -> int:
    return min(graph.degree(v) for v in graph.vertices())


def _check_terminals(graph: GraphLike, terminals: Iterable[Any]) -> list[Any]:
    items = list(terminals)
    if len(set(items)) != len(items):
        raise NonDistinctVerticesError("terminals must be distinct")
    for v in items:
        if not graph.has_vertex(v):
            raise VertexAbsentError(f"{v} is not a vertex of {graph_label(graph)}")
    return sorted(items)


def _probe(
    view: GraphLike, terminals: Sequence[Any], t: int, node_budget: int | None
) -> tuple[tuple[Tree, ...] | None, int]:
    """(packing or None, explored); SearchBudgetExceeded propagates."""
    outcome = find_packing(view, terminals, t, node_budget=node_budget)
    return outcome.trees, outcome.explored


def kappa_S_exact(  # noqa: N802
    graph: GraphLike,
    terminals: Iterable[Any],
    *,
    warm_start: int | None = None,
    node_budget: int | None = None,
) -> PackingResult:
    """
    The maximum number of internally disjoint S-trees.

    Starts at ``warm_start`` (n - 1 for a 4-set in EA_n), climbs while packings
    exist and descends while they do not. A probe that exhausts its budget ends
    the climb with ``complete=False``: the value is then only a lower bound.

    Raises:
        GraphSizeError: The graph exceeds ``SEARCH.MAX_VERTICES``.
    """
    limit = int(settings.SEARCH.MAX_VERTICES)
    if graph.num_vertices > limit:
        raise GraphSizeError(f"{graph_label(graph)} has more than {limit} vertices")
    members = _check_terminals(graph, terminals)
    view = as_view(graph)
    cap = min(graph.degree(s) for s in members)
    if warm_start is None:
        godan_set = isinstance(graph, GodanGraph) and len(members) == WARM_START_SIZE
        warm_start = graph.n - 1 if godan_set else 1
    t = max(0, min(warm_start, cap))
    explored = 0
    best: tuple[Tree, ...] = ()
    best_t = 0
    complete = True
    with telemetry.span(
        "oracle.kappa_S", {"graph": graph_label(graph), "terminals": members, "start": t}
    ):
        # descend to a feasible t
        while t > 0:
            try:
                trees, nodes = _probe(view, members, t, node_budget)
            except SearchBudgetExceeded as exc:
                explored += exc.explored
                complete = False
                t -= 1
                continue
            explored += nodes
            if trees is not None:
                best, best_t = trees, t
                break
            t -= 1
        # climb while feasible
        t = best_t + 1
        while complete and t <= cap:
            try:
                trees, nodes = _probe(view, members, t, node_budget)
            except SearchBudgetExceeded as exc:
                explored += exc.explored
                complete = False
                break
            explored += nodes
            if trees is None:
                break
            best, best_t = trees, t
            t += 1
    logger.debug("kappa_S computed", value=best_t, complete=complete, explored=explored)
    return PackingResult(
        terminals=members, max_t=best_t, witness=best, explored=explored, complete=complete
    )


def _subsets(
    graph: GraphLike, k: int, exhaustive: bool, sample: int | None, seed: int
) -> Iterator[tuple[Any, ...]]:
    vertices = graph.vertices()
    if exhaustive:
        yield from itertools.combinations(vertices, k)
        return
    rng = random.Random(seed)
    count = int(settings.SEARCH.KAPPA_SAMPLES) if sample is None else sample
    for _ in range(count):
        yield tuple(sorted(rng.sample(vertices, k)))


def _has_tight_edge(graph: GraphLike, subset: Sequence[Any], delta: int) -> bool:
    tight = [v for v in subset if graph.degree(v) == delta]
    return any(v in graph.neighbors(u) for u, v in pairs(tight))


def kappa_k_exact(
    graph: GraphLike,
    k: int,
    *,
    exhaustive: bool = True,
    sample: int | None = None,
    seed: int | None = None,
    node_budget: int | None = None,
) -> KappaResult:
    """
    κ_k(G): the minimum over k-subsets S of the maximum number of S-trees.

    The running value starts at δ(G) and only ever decreases, so each subset
    costs one probe unless it lowers the value. Subsets containing two adjacent
    minimum-degree vertices go first. With sampling the result is an upper
    bound witnessed by ``minimizer``.

    Raises:
        GraphSizeError: Exhaustive mode on more than ``SEARCH.EXHAUSTIVE_MAX_VERTICES``
            vertices, or k out of range.
    """
    if not 2 <= k <= graph.num_vertices:  # noqa: PLR2004
        raise GraphSizeError(f"k={k} out of range for {graph_label(graph)}")
    limit = int(settings.SEARCH.EXHAUSTIVE_MAX_VERTICES)
    if exhaustive and graph.num_vertices > limit:
        raise GraphSizeError(f"exhaustive kappa_k needs at most {limit} vertices")
    seed = int(settings.SWEEP.SEED) if seed is None else seed
    delta = min_degree(graph)
    view = as_view(graph)
    subsets = list(_subsets(graph, k, exhaustive, sample, seed))
    subsets.sort(key=lambda s: not _has_tight_edge(graph, s, delta))
    current = delta
    minimizer: tuple[Any, ...] | None = subsets[0] if subsets else None
    complete = True
    for subset in subsets:
        while current > 0:
            try:
                trees, _ = _probe(view, subset, current, node_budget)
            except SearchBudgetExceeded:
                complete = False
                logger.warning(
                    "subset search exceeded its budget", subset=[str(v) for v in subset]
                )
                break
            if trees is not None:
                break
            current -= 1
            minimizer = subset
        if current == 0:
            break
    logger.info(
        "kappa_k computed", graph=graph_label(graph), k=k, value=current, subsets=len(subsets)
    )
    return KappaResult(
        graph=graph_label(graph),
        k=k,
        value=current,
        exhaustive=exhaustive,
        subsets=len(subsets),
        minimizer=minimizer,
        seed=None if exhaustive else seed,
        complete=complete,
    )


def upper_bound_min_degree_rule(graph: GraphLike, k: int) -> int | None:
    """
    δ(G) - 1 when two adjacent vertices have degree δ(G), else None.

    The rule needs an edge between two minimum-degree vertices. K_{1,3} has
    none (its leaves are pairwise non-adjacent), so it gets None rather than
    the bound 0; its true κ_3 of 1 comes from `kappa_k_exact`.

    Raises:
        GraphSizeError: k is outside 3..|V|.
    """
    if not 3 <= k <= graph.num_vertices:  # noqa: PLR2004
        raise GraphSizeError(f"the degree rule needs 3 <= k <= |V|, got k={k}")
    delta = min_degree(graph)
    tight = {v for v in graph.vertices() if graph.degree(v) == delta}
    if any(v in tight for u in tight for v in graph.neighbors(u)):
        return delta - 1
    return None


def whitney_kappa(graph: GraphLike) -> int:
    """min over vertex pairs of the number of internally disjoint paths between them."""
    view = as_view(graph)
    return min(local_connectivity(view, u, v) for u, v in pairs(view.vertices()))


def descent_check(graph: GraphLike, k: int, **options: Any) -> DescentResult:
    """κ_k and κ_{k-1} by `kappa_k_exact`, compared against r - 1 for r = δ(G)."""
    upper = kappa_k_exact(graph, k, **options)
    lower = kappa_k_exact(graph, k - 1, **options)
    return DescentResult(
        graph=graph_label(graph),
        k=k,
        r=min_degree(graph),
        kappa_k=upper.value,
        kappa_k_minus_1=lower.value,
    )
