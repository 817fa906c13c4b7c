"""
Entry point of the builder.

`build_idsts` validates the terminal set, picks a cluster position and hands
the set to the construction for its split shape at that position, trying the
other positions when the first one fails. Every returned set has passed
`verify_idst`.
"""

from collections.abc import Callable, Sequence

from godan_idst.builder.frame import Frame
from godan_idst.builder.split3 import lemma_s3
from godan_idst.builder.split22 import lemma_s22
from godan_idst.builder.split211 import lemma_s211
from godan_idst.builder.split1111 import lemma_s1111
from godan_idst.config import settings
from godan_idst.core.exceptions import (
    ConstructionError,
    GraphError,
    GraphSizeError,
    InternalConsistencyError,
    PreconditionError,
    SearchBudgetExceeded,
    TerminalSetError,
)
from godan_idst.core.graphs import (
    CayleyGraph,
    ClusterRef,
    GodanGraph,
    an_part_of,
    build_godan,
    check_position,
    cluster_isomorphism,
    cluster_of,
)
from godan_idst.core.packing import find_packing
from godan_idst.core.permutations import FIRST_DOUBLE_SWAP, MIN_ORDER, Permutation
from godan_idst.core.verify import verify_idst
from godan_idst.dto.models import CaseTag, Lemma, SteinerTreeSet
from godan_idst.utils.logging import get_logger
from godan_idst.utils.telemetry import telemetry

logger = get_logger(__name__)

TERMINAL_COUNT = 4

Builder = Callable[[CayleyGraph, Sequence[Permutation], int], SteinerTreeSet]


def validate_terminals(
    graph: CayleyGraph, terminals: Sequence[Permutation]
) -> tuple[Permutation, ...]:
    """
    Check that ``terminals`` are four distinct vertices of ``graph``; return them sorted.

    Raises:
        TerminalSetError: Wrong size, repeated vertices or foreign vertices.
    """
    items = tuple(terminals)
    if len(items) != TERMINAL_COUNT:
        raise TerminalSetError(f"S must have exactly {TERMINAL_COUNT} vertices, got {len(items)}")
    if len(set(items)) != len(items):
        raise TerminalSetError(f"S repeats a vertex: {[str(s) for s in items]}")
    for s in items:
        if not graph.has_vertex(s):
            raise TerminalSetError(f"{s} is not a vertex of {graph!r}")
    return tuple(sorted(items))


def base_ea3(graph: CayleyGraph, terminals: Sequence[Permutation]) -> SteinerTreeSet:
    """
    Two trees in EA_3, found by exact packing.

    The branch records how S meets the two AN parts: 3 + 1 ("Case1") or 2 + 2 ("Case2").
    """
    if graph.n != MIN_ORDER:
        raise PreconditionError(f"the base case needs n = 3, got n = {graph.n}")
    outcome = find_packing(graph.view(), terminals, MIN_ORDER - 1)
    if outcome.trees is None:
        raise InternalConsistencyError(f"EA_3 has no two trees for {[str(s) for s in terminals]}")
    in_first = sum(1 for s in terminals if an_part_of(s) == 1)
    branch = "Case2" if in_first == 2 else "Case1"  # noqa: PLR2004
    tag = CaseTag(lemma=Lemma.BASE_EA3, branch=branch)
    return SteinerTreeSet(n=graph.n, terminals=terminals, trees=outcome.trees, case=tag)


def recurse_case(
    graph: CayleyGraph, terminals: Sequence[Permutation], cluster: ClusterRef
) -> SteinerTreeSet:
    """
    n-1 trees when S lies inside one cluster.

    The cluster is a copy of EA_{n-1}; its n-2 trees are built there and mapped
    back, and the last tree joins the four out-neighbors in the other clusters.
    """
    n, m = graph.n, cluster.position
    frame = Frame(graph, m, terminals)
    if any(frame.cl(s) != cluster.symbol for s in frame.terminals):
        raise PreconditionError(f"S does not lie inside cluster {cluster}")
    iso = cluster_isomorphism(cluster, n)
    inside = [iso.to_small(s) for s in frame.terminals]
    inner = build_idsts(build_godan(n - 1), inside, fallback=False)
    assembly = frame.assembly()
    for index, tree in enumerate(inner.trees):
        assembly.plan(f"T{index + 1}").tree(tree.map(iso.to_large))
    outer = assembly.plan(f"T{n - 1}")
    for s in frame.terminals:
        outer.edge(s, frame.out(s))
    region = frame.cluster(*frame.symbols_except(cluster.symbol))
    outer.steiner(region, [frame.out(s) for s in frame.terminals])
    trees = assembly.solve()
    report = verify_idst(graph, trees, frame.terminals, expected=n - 1)
    if not report.overall:
        detail = report.failures()[0].detail
        raise ConstructionError(f"recursion at {cluster} failed verification: {detail}")
    tag = CaseTag(lemma=Lemma.RECURSE, position=m).nested(inner.case)
    return SteinerTreeSet(n=n, terminals=frame.terminals, trees=trees, case=tag)


def _recurse_at(graph: CayleyGraph, terminals: Sequence[Permutation], m: int) -> SteinerTreeSet:
    return recurse_case(graph, terminals, cluster_of(min(terminals), m))


BUILDERS: dict[tuple[int, ...], Builder] = {
    (4,): _recurse_at,
    (3, 1): lemma_s3,
    (2, 2): lemma_s22,
    (2, 1, 1): lemma_s211,
    (1, 1, 1, 1): lemma_s1111,
}

SPLIT_LEMMA = {
    (4,): Lemma.RECURSE,
    (3, 1): Lemma.S3,
    (2, 2): Lemma.S22,
    (2, 1, 1): Lemma.S211,
    (1, 1, 1, 1): Lemma.S1111,
}


def preferred_position(n: int, m: int | None = None) -> int:
    """``m`` when given, else the configured ``BUILDER.POSITION`` capped at n, else n."""
    if m is not None:
        check_position(n, m)
        return m
    configured = int(settings.BUILDER.POSITION)
    return min(configured, n) if configured >= FIRST_DOUBLE_SWAP else n


def planned_lemma(
    graph: CayleyGraph, terminals: Sequence[Permutation], m: int | None = None
) -> Lemma:
    """The construction `build_idsts` starts with for this set."""
    if graph.n == MIN_ORDER:
        return Lemma.BASE_EA3
    shape = Frame(graph, preferred_position(graph.n, m), terminals).shape()
    return SPLIT_LEMMA[shape]


def _positions(
    graph: CayleyGraph, terminals: Sequence[Permutation], m: int | None
) -> list[tuple[int, tuple[int, ...]]]:
    first = preferred_position(graph.n, m)
    positions = [first, *(p for p in range(FIRST_DOUBLE_SWAP, graph.n + 1) if p != first)]
    shaped = [(p, Frame(graph, p, terminals).shape()) for p in positions]
    # a shared cluster anywhere rules the all-distinct construction out
    return sorted(shaped, key=lambda item: item[1] == (1, 1, 1, 1))


def _construct(
    graph: CayleyGraph, terminals: tuple[Permutation, ...], m: int | None
) -> SteinerTreeSet:
    if graph.n == MIN_ORDER:
        return base_ea3(graph, terminals)
    attempts: list[str] = []
    for position, shape in _positions(graph, terminals, m):
        try:
            return BUILDERS[shape](graph, terminals, position)
        except ConstructionError as exc:
            attempts.append(f"m={position}: {exc}")
            attempts.extend(exc.attempts)
            logger.debug("position rejected", position=position, shape=shape, reason=str(exc))
    raise ConstructionError(
        f"no construction for {[str(s) for s in terminals]} in EA_{graph.n}", attempts=attempts
    )


def _search(
    graph: CayleyGraph, terminals: tuple[Permutation, ...], failed: Lemma
) -> SteinerTreeSet:
    try:
        outcome = find_packing(graph.view(), terminals, graph.n - 1)
    except SearchBudgetExceeded as exc:
        raise ConstructionError(f"fallback search for {failed} exceeded its budget") from exc
    if outcome.trees is None:
        raise InternalConsistencyError(
            f"EA_{graph.n} has no {graph.n - 1} trees for {[str(s) for s in terminals]}"
        )
    tag = CaseTag(lemma=Lemma.SEARCH, branch=str(failed), suspect=True)
    return SteinerTreeSet(n=graph.n, terminals=terminals, trees=outcome.trees, case=tag)


@telemetry.instrument("builder.build_idsts")
def build_idsts(
    graph: CayleyGraph,
    terminals: Sequence[Permutation],
    *,
    m: int | None = None,
    fallback: bool | None = None,
) -> SteinerTreeSet:
    """
    Build n-1 internally disjoint S-trees in EA_n.

    Args:
        graph: EA_n with 3 <= n <= ``BUILDER.MAX_N``.
        terminals: The four terminals.
        m: Cluster position to split at first; defaults to ``BUILDER.POSITION`` or n.
        fallback: Replace a failed construction by exact packing, tagged suspect;
            defaults to ``BUILDER.FALLBACK_SEARCH``.

    Returns:
        SteinerTreeSet: n-1 trees that passed `verify_idst`.

    Raises:
        TerminalSetError: ``terminals`` is not a 4-set of vertices.
        ConstructionError: No construction applied and the fallback is off.
        InternalConsistencyError: A constructed set failed verification.
    """
    if not isinstance(graph, GodanGraph):
        raise GraphError(f"IDSTs are built in EA_n, not in {graph!r}")
    if graph.n > settings.BUILDER.MAX_N:
        raise GraphSizeError(f"n={graph.n} exceeds BUILDER.MAX_N={settings.BUILDER.MAX_N}")
    members = validate_terminals(graph, terminals)
    telemetry.get_counter("idst.builds").add(1)
    use_fallback = settings.BUILDER.FALLBACK_SEARCH if fallback is None else fallback
    try:
        result = _construct(graph, members, m)
    except ConstructionError as exc:
        if not use_fallback:
            raise
        failed = planned_lemma(graph, members, m)
        logger.warning(
            "construction failed, using exact packing",
            terminals=[str(s) for s in members],
            lemma=str(failed),
            reason=str(exc),
        )
        telemetry.get_counter("idst.fallbacks").add(1)
        result = _search(graph, members, failed)
    report = verify_idst(
        graph, result.trees, members, expected=graph.n - 1, subject=str(result.case)
    )
    if not report.overall:
        failure = report.failures()[0]
        logger.error(
            "constructed set failed verification", case_tag=str(result.case), check=failure.name
        )
        raise InternalConsistencyError(f"{result.case} produced an invalid set: {failure.detail}")
    logger.debug("tree set built", case_tag=str(result.case), trees=len(result))
    return result
