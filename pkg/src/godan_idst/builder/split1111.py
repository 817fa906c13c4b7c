"""
Four terminals in four different clusters at every position 4..n.

One terminal x is moved to the identity by a left translation; x's cluster a
hosts no tree and every other cluster c hosts T_c, which reaches each terminal
t outside c through P[t, t_c'] (or the edge tt' when t' lies in c). The
vertices those connectors use are claimed during assembly, which is what the
deletion views around each cluster tree amount to.

Case 1 is the situation where some terminal t (a trigger) has t_a' next to x,
so P[t, t_a'] runs into the neighborhood x needs for its own connectors. It
only arises for n <= 6, and at position n the possible triggers are known for
n = 5 and n = 6; both facts are asserted. Its subcases split on how many
triggers there are (n = 5, 6) or whether the trigger is x' itself (n = 4).
Case 1 also tries hub layouts: one cluster tree T_c picks up a set R of
terminals inside cluster a, through t' or t_a', and joins them to x there,
which leaves the other trees free of R's connectors into c. When no layout
assembles, the AN parts are tried.
"""

import itertools
from collections.abc import Iterator, Sequence

from attrs import evolve

from godan_idst.builder.frame import Frame, Roles, run_roles
from godan_idst.builder.parts import ans3_applies, lemma_ans3, lemma_s4
from godan_idst.builder.translation import left_translate
from godan_idst.core.assembly import TreeAssembly
from godan_idst.core.exceptions import (
    ConstructionError,
    InternalConsistencyError,
    PreconditionError,
)
from godan_idst.core.graphs import CayleyGraph, an_part_of
from godan_idst.core.permutations import FIRST_DOUBLE_SWAP, Permutation, compose, inverse
from godan_idst.dto.models import CaseTag, Lemma, SteinerTreeSet
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)

CLAIM_ORDERS = {
    6: frozenset({"215364", "214635"}),
    5: frozenset({"21453", "31452", "23451", "21534", "51234", "25134", "21354"}),
}
CASE1_BRANCH = {6: "Case1/Subcase1.1", 5: "Case1/Subcase1.2", 4: "Case1/Subcase1.3"}
LARGEST_CASE1_ORDER = 6
SMALLEST_CASE1_ORDER = 4


def triggers(frame: Frame, roles: Roles) -> list[Permutation]:
    """Those of y, z, w whose t_a' is a neighbor of x."""
    x = roles[0]
    a = frame.cl(x)
    around = frame.graph.neighbors(x)
    return [t for t in roles[1:] if frame.end(t, a) in around]


def trigger(frame: Frame, roles: Roles) -> Permutation | None:
    """The first trigger, if any."""
    return next(iter(triggers(frame, roles)), None)


def case_branch(frame: Frame, roles: Roles) -> str:
    """
    "Case2", or the Case 1 subcase when a trigger exists.

    Raises:
        InternalConsistencyError: At position n, a trigger exists for n >= 7 or
            lies outside the finite list known for n = 5, 6.
    """
    found = triggers(frame, roles)
    if not found:
        return "Case2"
    n = frame.n
    if frame.m == n:
        if n > LARGEST_CASE1_ORDER:
            raise InternalConsistencyError(f"{found[0]} triggers Case 1 at n={n}")
        for t in found:
            if n in CLAIM_ORDERS and str(t) not in CLAIM_ORDERS[n]:
                raise InternalConsistencyError(
                    f"{t} triggers Case 1 at n={n} but is not a known trigger"
                )
    if n not in CASE1_BRANCH:
        return "Case1"
    if n == SMALLEST_CASE1_ORDER:
        first = frame.out(roles[0]) in found
    else:
        first = len(found) > 1
    return f"{CASE1_BRANCH[n]}.{1 if first else 2}"


def _direct_masks(frame: Frame, a: int) -> Iterator[set[Permutation]]:
    # terminals that may enter the cluster of t' by the edge tt' instead of two steps
    direct = [t for t in frame.terminals if frame.cl(frame.out(t)) != a]
    for mask in itertools.product((False, True), repeat=len(direct)):
        yield {t for t, flag in zip(direct, mask, strict=True) if flag}


def _cluster_trees(
    frame: Frame,
    assembly: TreeAssembly,
    a: int,
    chosen: set[Permutation],
    hub: tuple[int, Sequence[Permutation]] | None = None,
) -> None:
    for c in frame.symbols_except(a):
        plan = assembly.plan(f"T{c}")
        picked = hub[1] if hub is not None and hub[0] == c else ()
        ends = []
        for t in frame.terminals:
            if t in picked:
                continue
            if frame.cl(t) == c:
                ends.append(t)
            elif t in chosen and frame.cl(frame.out(t)) == c:
                plan.edge(t, frame.out(t))
                ends.append(frame.out(t))
            else:
                plan.path(frame.step(t, c))
                ends.append(frame.end(t, c))
        plan.steiner(frame.cluster(c), ends)
        if picked:
            x = next(t for t in frame.terminals if frame.cl(t) == a)
            entries = []
            for t in picked:
                target = frame.out(t) if frame.cl(frame.out(t)) == a else frame.end(t, a)
                frame.reach(plan, t, target)
                entries.append(target)
            plan.steiner(frame.cluster(a), [x, *entries])


def _hubs(frame: Frame, roles: Roles) -> Iterator[tuple[int, tuple[Permutation, ...]]]:
    a = frame.cl(roles[0])
    for c in frame.symbols_except(a):
        movable = [t for t in roles[1:] if frame.cl(t) != c]
        for size in range(1, len(movable) + 1):
            for picked in itertools.combinations(movable, size):
                yield c, picked


def _layouts(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    a = frame.cl(roles[0])
    branch = case_branch(frame, roles)
    for chosen in _direct_masks(frame, a):
        assembly = frame.assembly()
        _cluster_trees(frame, assembly, a, chosen)
        yield (f"{branch}/direct" if chosen else branch), assembly
    if branch == "Case2":
        return
    for hub in _hubs(frame, roles):
        for chosen in _direct_masks(frame, a):
            assembly = frame.assembly()
            _cluster_trees(frame, assembly, a, chosen, hub)
            yield f"{branch}/hub", assembly


def _by_parts(graph: CayleyGraph, frame: Frame, branch: str) -> SteinerTreeSet:
    terminals = frame.terminals
    if len({an_part_of(s) for s in terminals}) == 1:
        inner = lemma_s4(graph, terminals, frame.m)
    elif ans3_applies(graph, terminals):
        inner = lemma_ans3(graph, terminals, frame.m)
    else:
        raise PreconditionError("the terminals fit neither AN-part construction")
    outer = CaseTag(lemma=Lemma.S1111, branch=branch, position=frame.m)
    return evolve(inner, case=outer.nested(inner.case))


def lemma_s1111(graph: CayleyGraph, terminals: Sequence[Permutation], m: int) -> SteinerTreeSet:
    """
    n-1 trees when no cluster at any position 4..n holds two terminals.

    Raises:
        PreconditionError: Two terminals share a cluster at some position.
        ConstructionError: Every layout and the AN-part constructions failed.
        InternalConsistencyError: A Case 1 trigger contradicts the known triggers.
    """
    frame = Frame(graph, m, terminals)
    for position in range(FIRST_DOUBLE_SWAP, graph.n + 1):
        if Frame(graph, position, terminals).shape() != (1, 1, 1, 1):
            raise PreconditionError(f"two terminals share a cluster at position {position}")
    attempts: list[str] = []
    branches: list[str] = []
    for x in frame.terminals:
        sigma = inverse(x)
        moved = Frame(graph, m, [compose(sigma, s) for s in frame.terminals])
        identity = compose(sigma, x)
        roles = (identity, *(s for s in moved.terminals if s != identity))
        branches.append(case_branch(moved, roles))
        try:
            found = run_roles(moved, Lemma.S1111, [roles], _layouts, translation=f"x={x}")
        except ConstructionError as exc:
            attempts.extend(exc.attempts)
            continue
        return left_translate(graph, x, found)
    try:
        return _by_parts(graph, frame, branches[0])
    except ConstructionError as exc:
        attempts.append(f"{Lemma.S1111}/parts: {exc}")
        logger.debug("AN-part constructions rejected", reason=str(exc))
    raise ConstructionError(
        f"{Lemma.S1111} found no construction at position {m}", attempts=attempts
    )
