"""
Two terminals x, y in cluster a and two terminals z, w in cluster b.

P_d are n-1 internally disjoint x-y paths in a, labelled by the cluster d that
x's first neighbor on the path points to; Q_i are n-1 internally disjoint z-w
paths in b. P_b is spliced into one Q (called Q_last) through a path P̃ inside b
from x_b' to the first vertex it meets on the Q's. Every other P_d is joined to
a Q_i by a connector L from X = {x_d'} to Z = {z(i)'} through the remaining
clusters, where z(i) is z's neighbor on Q_i. At most one z(i)' lies in a; when
one does, that Q is attached inside a instead (Case 2).
"""

from collections.abc import Iterator, Sequence

from godan_idst.builder.frame import Frame, Path, Roles, role_orders, run_roles
from godan_idst.core.assembly import TreeAssembly
from godan_idst.core.connectivity import disjoint_set_paths, internally_disjoint_paths, k_fan
from godan_idst.core.exceptions import PreconditionError
from godan_idst.core.graphs import CayleyGraph, ordered_neighbors
from godan_idst.core.permutations import Permutation
from godan_idst.dto.models import Lemma, SteinerTreeSet
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)


def _splice(frame: Frame, start: Permutation, qs: Sequence[Path]) -> Path:
    """P̃: from x_b' inside b up to its first vertex on the Q's."""
    on_q = {v for q in qs for v in q}
    if start in on_q:
        return (start,)
    return k_fan(frame.cluster(frame.cl(start)), start, on_q, 1)[0]


def _connect(
    frame: Frame,
    assembly: TreeAssembly,
    ps: dict[int, Path],
    senders: Sequence[int],
    receivers: dict[Permutation, Sequence[Path]],
) -> None:
    """
    One tree per sender cluster d: P_d, x_d x_d', a connector L and the pieces
    attached to the receiver L ends in.
    """
    a, b = frame.cl(ps[senders[0]][0]), frame.cl(next(iter(receivers.values()))[0][0])
    starts = {frame.out(ps[d][1]): d for d in senders}
    if len(starts) != len(receivers):
        raise PreconditionError("connector ends are unbalanced")
    region = frame.cluster(*frame.symbols_except(a, b))
    family = disjoint_set_paths(region, starts, receivers, len(starts))
    for connector in family:
        d = starts[connector[0]]
        plan = assembly.plan(f"T{d}").path(ps[d]).edge(ps[d][1], connector[0]).path(connector)
        for piece in receivers[connector[-1]]:
            plan.path(piece)


def _plans(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    x, y, z, w = roles
    a, b = frame.cl(x), frame.cl(z)
    others = frame.symbols_except(a, b)
    ps = frame.labelled_paths(x, y)
    qs = list(internally_disjoint_paths(frame.cluster(b), z, w, frame.n - 1).paths)
    tilde = _splice(frame, frame.out(ps[b][1]), qs)
    u = tilde[-1]
    for last in [q for q in qs if u in q]:
        rest = [q for q in qs if q is not last]
        ends = {frame.out(q[1]): q for q in rest}
        in_a = [v for v in ends if frame.cl(v) == a]

        def p_b_tree(assembly: TreeAssembly, last: Path = last) -> None:
            assembly.plan(f"T{b}").path(ps[b]).edge(ps[b][1], tilde[0]).path(tilde).path(last)

        if not in_a:
            assembly = frame.assembly()
            p_b_tree(assembly)
            _connect(frame, assembly, ps, others, {v: [q, (q[1], v)] for v, q in ends.items()})
            yield "Case1", assembly
            continue
        landing = in_a[0]
        q_star = ends.pop(landing)
        z_star = q_star[1]
        # anchors: z* z*' itself when z*' lies on some P, else through a neighbor of z*'
        anchors: list[tuple[str, Path, int]] = []
        if (hit := frame.owner(ps, landing)) is not None:
            anchors.append(("Subcase2.1", (z_star, landing), hit))
        else:
            for u1 in ordered_neighbors(landing, frame.position).values():
                if (hit := frame.owner(ps, u1)) is not None:
                    anchors.append(("Subcase2.2", (z_star, landing, u1), hit))
        for subcase, anchor, owner in anchors:
            assembly = frame.assembly()
            if owner == b:
                assembly.plan(f"T{b}").path(ps[b]).path(q_star).path(anchor)
                receivers = {v: [q, (q[1], v)] for v, q in ends.items()}
                receivers[frame.out(last[1])] = [last, (last[1], frame.out(last[1]))]
                _connect(frame, assembly, ps, others, receivers)
                yield f"Case2/{subcase}.1", assembly
            else:
                p_b_tree(assembly)
                assembly.plan(f"T{owner}").path(ps[owner]).path(q_star).path(anchor)
                senders = [d for d in others if d != owner]
                if senders:
                    routes = {v: [q, (q[1], v)] for v, q in ends.items()}
                    _connect(frame, assembly, ps, senders, routes)
                yield f"Case2/{subcase}.2", assembly
        for u1 in ordered_neighbors(landing, frame.position).values():
            if frame.cl(frame.out(u1)) not in others or frame.owner(ps, u1) is not None:
                continue
            assembly = frame.assembly()
            p_b_tree(assembly)
            receivers = {v: [q, (q[1], v)] for v, q in ends.items()}
            receivers[frame.out(u1)] = [q_star, (z_star, landing, u1, frame.out(u1))]
            _connect(frame, assembly, ps, others, receivers)
            yield "Case2/Subcase2.2", assembly
            break


def lemma_s22(graph: CayleyGraph, terminals: Sequence[Permutation], m: int) -> SteinerTreeSet:
    """
    n-1 trees for a (2, 2) split at position ``m``.

    Raises:
        PreconditionError: The terminals are not split (2, 2) at ``m``.
        ConstructionError: No role assignment assembled into a verified set.
    """
    frame = Frame(graph, m, terminals)
    groups = list(frame.split().values())
    if [len(g) for g in groups] != [2, 2]:
        raise PreconditionError(f"terminals are not split (2, 2) at position {m}")
    first, second = groups
    orders = [*role_orders([first, second]), *role_orders([second, first])]
    return run_roles(frame, Lemma.S22, orders, _plans)
