"""
Constructions across the two AN parts of EA_n.

EA_n is two copies of AN_n (even and odd permutations) joined by the perfect
matching x ~ x̃ = x∘(12). AN_n has n-2 internally disjoint trees for any 4-set,
found here by exact packing; the matching and the other part supply the last tree.
"""

from collections.abc import Iterator, Sequence

from godan_idst.builder.frame import Frame, Roles, run_roles
from godan_idst.core.assembly import TreeAssembly
from godan_idst.core.exceptions import (
    InternalConsistencyError,
    PreconditionError,
    SearchBudgetExceeded,
)
from godan_idst.core.graphs import (
    CayleyGraph,
    GraphLike,
    an_part_of,
    an_part_view,
    edge,
    parity_neighbor,
)
from godan_idst.core.packing import find_packing
from godan_idst.core.permutations import Permutation
from godan_idst.core.trees import Tree
from godan_idst.dto.models import Lemma, SteinerTreeSet
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)

OTHER_PART = {1: 2, 2: 1}


def an_idst_pack(part_view: GraphLike, terminals: Sequence[Permutation], t: int) -> list[Tree]:
    """
    ``t`` internally disjoint trees for ``terminals`` inside one AN part.

    Raises:
        InternalConsistencyError: The search proved that no such packing exists.
        PreconditionError: The search ran out of budget.
    """
    try:
        outcome = find_packing(part_view, terminals, t)
    except SearchBudgetExceeded as exc:
        raise PreconditionError(f"AN packing for t={t} exceeded its budget") from exc
    if outcome.trees is None:
        raise InternalConsistencyError(
            f"no {t} internally disjoint trees for {[str(s) for s in terminals]} in an AN part"
        )
    return list(outcome.trees)


def _single_part(terminals: Sequence[Permutation]) -> int:
    parts = {an_part_of(s) for s in terminals}
    if len(parts) != 1:
        raise PreconditionError("terminals are not in one AN part")
    return parts.pop()


def _s4_plans(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    part = _single_part(roles)
    inner = an_idst_pack(an_part_view(frame.graph, part), roles, frame.n - 2)
    assembly = frame.assembly()
    for index, tree in enumerate(inner):
        assembly.plan(f"T{index + 1}").tree(tree)
    outer = assembly.plan(f"T{frame.n - 1}")
    for s in roles:
        outer.edge(s, parity_neighbor(s))
    outer.steiner(an_part_view(frame.graph, OTHER_PART[part]), [parity_neighbor(s) for s in roles])
    yield "", assembly


def lemma_s4(
    graph: CayleyGraph, terminals: Sequence[Permutation], m: int | None = None
) -> SteinerTreeSet:
    """
    n-1 trees when all four terminals lie in one AN part.

    n-2 trees come from the part itself; the last runs through the four parity
    neighbors in the other part.
    """
    frame = Frame(graph, m, terminals)
    _single_part(frame.terminals)
    return run_roles(frame, Lemma.S4, [frame.terminals], _s4_plans)


def ans3_split(terminals: Sequence[Permutation]) -> tuple[tuple[Permutation, ...], Permutation]:
    """Split into the three co-part terminals and the lone one; PreconditionError otherwise."""
    by_part: dict[int, list[Permutation]] = {}
    for s in sorted(terminals):
        by_part.setdefault(an_part_of(s), []).append(s)
    sizes = sorted(len(group) for group in by_part.values())
    if sizes != [1, 3]:
        raise PreconditionError("terminals are not split 3+1 across the AN parts")
    trio = next(tuple(g) for g in by_part.values() if len(g) == 3)  # noqa: PLR2004
    lone = next(g[0] for g in by_part.values() if len(g) == 1)
    return trio, lone


def ans3_applies(graph: GraphLike, terminals: Sequence[Permutation]) -> bool:
    try:
        trio, w = ans3_split(terminals)
    except PreconditionError:
        return False
    wt = parity_neighbor(w)
    return wt not in trio and sum(1 for s in trio if s in graph.neighbors(wt)) <= 1


def _reroute(tree: Tree, wt: Permutation, w: Permutation) -> tuple[list, list]:
    """Drop w̃ from a tree, reattaching each of its neighbors ũ through w - u - ũ."""
    edges = [e for e in tree.edges if wt not in e]
    paths = []
    for a, b in tree.edges:
        if wt in (a, b):
            ut = b if a == wt else a
            paths.append((w, parity_neighbor(ut), ut))
    return edges, paths


def _ans3_plans(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    x, y, z, w = roles
    trio = (x, y, z)
    wt = parity_neighbor(w)
    part = an_part_of(x)
    inner = an_idst_pack(an_part_view(frame.graph, part), (*trio, wt), frame.n - 2)
    touching = [s for s in trio if s in frame.graph.neighbors(wt)]
    branch = "Case2" if touching else "Case1"
    # the keeper keeps w̃ and gains ww̃; first the tree using the edge w̃-s, then by w̃-degree
    order = sorted(
        range(len(inner)),
        key=lambda i: (
            not any(edge(wt, s) in inner[i].edges for s in touching),
            -inner[i].degree(wt),
            i,
        ),
    )
    for keeper in order:
        assembly = frame.assembly()
        for index, tree in enumerate(inner):
            plan = assembly.plan(f"T{index + 1}")
            if index == keeper:
                plan.tree(tree).edge(w, wt)
                continue
            edges, paths = _reroute(tree, wt, w)
            for u, v in edges:
                plan.edge(u, v)
            for path in paths:
                plan.path(path)
            plan.vertices.update(tree.vertices - {wt})
        last = assembly.plan(f"T{frame.n - 1}")
        for s in trio:
            last.edge(s, parity_neighbor(s))
        last.steiner(
            an_part_view(frame.graph, OTHER_PART[part]), [*(parity_neighbor(s) for s in trio), w]
        )
        yield branch, assembly


def lemma_ans3(
    graph: CayleyGraph, terminals: Sequence[Permutation], m: int | None = None
) -> SteinerTreeSet:
    """
    n-1 trees when three terminals share an AN part and the fourth does not.

    Preconditions: w̃ is not a terminal and has at most one neighbor among x, y, z.
    Inner trees are packed for {x, y, z, w̃}; one keeps w̃ and gains the edge ww̃,
    the others replace w̃ by w through parity edges, and the last tree joins
    x̃, ỹ, z̃ and w in the other part.
    """
    frame = Frame(graph, m, terminals)
    trio, w = ans3_split(frame.terminals)
    if not ans3_applies(graph, frame.terminals):
        raise PreconditionError(f"the parity neighbor of {w} violates the 3+1 conditions")
    return run_roles(frame, Lemma.ANS3, [(*trio, w)], _ans3_plans)
