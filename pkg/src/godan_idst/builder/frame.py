"""
Shared vocabulary of the cluster constructions.

A `Frame` fixes the graph, the cluster position ``m`` and the terminal set, and
names the operations every construction is written in: ``cl(v)`` (cluster
symbol), ``out(v)`` (v'), ``toward(v, j)`` (v_j), ``step(v, j)`` (P[v, v_j']).
`run_roles` drives a construction over role assignments until one assembles
into a verified tree set.
"""

import itertools
from collections.abc import Callable, Iterable, Iterator, Sequence

from attrs import define, field

from godan_idst.core.assembly import TreeAssembly, TreePlan
from godan_idst.core.connectivity import internally_disjoint_paths
from godan_idst.core.exceptions import ClusterError, ConnectivityError, ConstructionError
from godan_idst.core.graphs import (
    CayleyGraph,
    SubgraphView,
    cluster_view,
    ordered_neighbors,
    out_neighbor,
    two_step_path,
)
from godan_idst.core.permutations import Permutation
from godan_idst.core.verify import verify_idst
from godan_idst.dto.models import CaseTag, Lemma, SteinerTreeSet
from godan_idst.utils.logging import get_logger
from godan_idst.utils.telemetry import telemetry

logger = get_logger(__name__)

Roles = tuple[Permutation, ...]
Path = tuple[Permutation, ...]
Construction = Callable[["Frame", Roles], Iterator[tuple[str, TreeAssembly]]]


@define(frozen=True)
class Frame:
    graph: CayleyGraph
    m: int | None
    terminals: tuple[Permutation, ...] = field(converter=lambda s: tuple(sorted(s)))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def position(self) -> int:
        if self.m is None:
            raise ClusterError("this construction has no cluster position")
        return self.m

    def cl(self, v: Permutation) -> int:
        return v(self.position)

    def out(self, v: Permutation) -> Permutation:
        return out_neighbor(v, self.position)

    def toward(self, v: Permutation, j: int) -> Permutation:
        if j == self.cl(v):
            raise ClusterError(f"{v} already lies in cluster {j}")
        return ordered_neighbors(v, self.position)[j]

    def step(self, v: Permutation, j: int) -> tuple[Permutation, ...]:
        return two_step_path(v, j, self.position)

    def end(self, v: Permutation, j: int) -> Permutation:
        """v_j', the far end of P[v, v_j']."""
        return self.out(self.toward(v, j))

    def cluster(self, *symbols: int) -> SubgraphView:
        return cluster_view(self.graph, self.position, symbols)

    def symbols_except(self, *excluded: int) -> list[int]:
        return [i for i in range(1, self.n + 1) if i not in excluded]

    def split(self) -> dict[int, list[Permutation]]:
        """Terminals grouped by cluster, largest group first, ties by symbol."""
        groups: dict[int, list[Permutation]] = {}
        for s in self.terminals:
            groups.setdefault(self.cl(s), []).append(s)
        return dict(sorted(groups.items(), key=lambda item: (-len(item[1]), item[0])))

    def shape(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.split().values())

    def assembly(self) -> TreeAssembly:
        return TreeAssembly(self.graph, self.terminals)

    def cluster_tree(self, plan: TreePlan, c: int, members: Sequence[Permutation]) -> TreePlan:
        """
        The per-cluster tree: members outside cluster ``c`` arrive through P[t, t_c'],
        members inside it are joined directly.
        """
        ends = []
        for t in members:
            if self.cl(t) == c:
                ends.append(t)
            else:
                plan.path(self.step(t, c))
                ends.append(self.end(t, c))
        return plan.steiner(self.cluster(c), ends)

    def reach(self, plan: TreePlan, t: Permutation, target: Permutation) -> TreePlan:
        """Join ``t`` to ``target``, which is either t' (one edge) or some t_j' (two steps)."""
        if target == self.out(t):
            return plan.edge(t, target)
        path = self.step(t, self.cl(target))
        if path[-1] != target:
            raise ClusterError(f"{target} is neither the out-neighbor of {t} nor a two-step end")
        return plan.path(path)

    def labelled_paths(self, x: Permutation, y: Permutation) -> dict[int, Path]:
        """
        n-1 internally disjoint x-y paths inside x's cluster, keyed by the cluster
        that the out-neighbor of x's successor on the path lies in.
        """
        family = internally_disjoint_paths(self.cluster(self.cl(x)), x, y, self.n - 1)
        return {self.cl(self.out(p[1])): p for p in family.paths}

    def owner(self, paths: dict[int, Path], v: Permutation) -> int | None:
        """The label of the path holding ``v`` as an inner vertex, if any."""
        return next((d for d, p in paths.items() if v in p[1:-1]), None)


def role_orders(groups: Sequence[Sequence[Permutation]]) -> Iterator[Roles]:
    """
    Every ordering inside each group, groups kept in place, in rank order.

    ``[[x, y], [z, w]]`` yields (x, y, z, w), (x, y, w, z), (y, x, z, w), ...
    """
    for parts in itertools.product(*(itertools.permutations(sorted(g)) for g in groups)):
        yield tuple(v for part in parts for v in part)


def run_roles(
    frame: Frame,
    lemma: Lemma,
    orders: Iterable[Roles],
    construct: Construction,
    *,
    translation: str | None = None,
) -> SteinerTreeSet:
    """
    Try ``construct`` on each role assignment and return the first verified set.

    Raises:
        ConstructionError: No assignment produced n-1 verified trees; ``attempts``
            lists what was tried and why it was rejected.
    """
    attempts: list[str] = []
    for roles in orders:
        names = tuple(str(v) for v in roles)
        try:
            for branch, assembly in construct(frame, roles):
                tag = CaseTag(
                    lemma=lemma,
                    branch=branch,
                    roles=names,
                    position=frame.m,
                    translation=translation,
                )
                try:
                    trees = assembly.solve()
                except (ConstructionError, ConnectivityError) as exc:
                    attempts.append(f"{tag} {names}: {exc}")
                    logger.debug(
                        "role assignment rejected", case_tag=str(tag), roles=names, reason=str(exc)
                    )
                    continue
                report = verify_idst(frame.graph, trees, frame.terminals, expected=frame.n - 1)
                if report.overall:
                    logger.debug(
                        "branch selected", case_tag=str(tag), roles=names, position=frame.m
                    )
                    return SteinerTreeSet(
                        n=frame.n, terminals=frame.terminals, trees=trees, case=tag
                    )
                failure = report.failures()[0]
                telemetry.get_counter("idst.verification_failures").add(1)
                attempts.append(f"{tag} {names}: {failure.detail or failure.name}")
                logger.debug(
                    "assembled set failed verification", case_tag=str(tag), check=failure.name
                )
        except (ConstructionError, ConnectivityError, ClusterError) as exc:
            attempts.append(f"{lemma} {names}: {exc}")
            logger.debug("role assignment rejected", lemma=str(lemma), roles=names, reason=str(exc))
    raise ConstructionError(
        f"{lemma} found no valid role assignment at position {frame.m}", attempts=attempts
    )
