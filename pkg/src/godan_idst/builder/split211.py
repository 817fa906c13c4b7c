"""
Two terminals x, y in cluster a, z alone in cluster c and w alone in cluster e.

P_d are n-1 internally disjoint x-y paths in a, labelled by the cluster d that
the successor of x on the path points to. Tree T_d takes P_d, the edge into
cluster d, and a Steiner tree there that picks up z and w (directly when they
live in d, through P[z, z_d'] and P[w, w_d'] otherwise).

That layout only breaks when P[z, z_e'] and P[w, w_c'] meet, which happens
exactly when w_c = z_e' (Case 2). Then w_c' = z_e is a neighbor of z, and the
subcases reroute z by where z' lands: another cluster (2.1), e (2.2) or a (2.3).
"""

from collections.abc import Iterator, Sequence

from godan_idst.builder.frame import Frame, Path, Roles, role_orders, run_roles
from godan_idst.core.assembly import TreeAssembly, TreePlan
from godan_idst.core.exceptions import PreconditionError
from godan_idst.core.graphs import CayleyGraph, ordered_neighbors
from godan_idst.core.permutations import Permutation
from godan_idst.dto.models import Lemma, SteinerTreeSet
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)


def _opened(frame: Frame, assembly: TreeAssembly, ps: dict[int, Path], d: int) -> TreePlan:
    """P_d plus the edge x_d x_d' into cluster d."""
    return assembly.plan(f"T{d}").path(ps[d]).edge(ps[d][1], frame.out(ps[d][1]))


def _join(frame: Frame, plan: TreePlan, t: Permutation, d: int) -> Permutation:
    if frame.cl(t) == d:
        return t
    plan.path(frame.step(t, d))
    return frame.end(t, d)


def _standard(
    frame: Frame, assembly: TreeAssembly, ps: dict[int, Path], roles: Roles, clusters: Sequence[int]
) -> None:
    _, _, z, w = roles
    for d in clusters:
        plan = _opened(frame, assembly, ps, d)
        ends = [frame.out(ps[d][1]), _join(frame, plan, z, d), _join(frame, plan, w, d)]
        plan.steiner(frame.cluster(d), ends)


def _detour(frame: Frame, assembly: TreeAssembly, ps: dict[int, Path], roles: Roles) -> TreePlan:
    """T_e reaching z through z, z_a, v, v' where v leaves z_a's cluster toward e."""
    x, _, z, w = roles
    e = frame.cl(w)
    zt = frame.toward(z, frame.cl(x))
    v = frame.toward(zt, e)
    plan = _opened(frame, assembly, ps, e).path((z, zt, v, frame.out(v)))
    return plan.steiner(frame.cluster(e), [frame.out(ps[e][1]), frame.out(v), w])


def _anchored(
    frame: Frame, ps: dict[int, Path], roles: Roles, anchor: Path, owner: int
) -> tuple[str, TreeAssembly]:
    """
    The tree owning the path that ``anchor`` lands on picks up z through the
    anchor and w through P[w, w_c'] and the edge z w_c'.
    """
    x, _, z, w = roles
    a, c, e = frame.cl(x), frame.cl(z), frame.cl(w)
    others = frame.symbols_except(a, c, e)
    link = frame.end(w, c)
    assembly = frame.assembly()
    assembly.plan(f"T{owner}").path(ps[owner]).path(frame.step(w, c)).path(anchor).edge(z, link)
    if owner == c:
        _detour(frame, assembly, ps, roles)
        _standard(frame, assembly, ps, roles, others)
        return "1", assembly
    if owner == e:
        zt = frame.toward(z, a)
        v = frame.toward(zt, e)
        tc = _opened(frame, assembly, ps, c).edge(v, frame.out(v))
        tc.steiner(frame.cluster(c), [frame.out(ps[c][1]), z, zt, v])
        tc.steiner(frame.cluster(e), [w, frame.out(v)])
        _standard(frame, assembly, ps, roles, others)
        return "2", assembly
    zd = frame.toward(z, owner)
    _detour(frame, assembly, ps, roles)
    tc = _opened(frame, assembly, ps, c).edge(zd, frame.out(zd))
    tc.steiner(frame.cluster(c), [frame.out(ps[c][1]), zd, z])
    tc.path(frame.step(w, owner))
    tc.steiner(frame.cluster(owner), [frame.out(zd), frame.end(w, owner)])
    _standard(frame, assembly, ps, roles, [d for d in others if d != owner])
    return "3", assembly


def _case23(frame: Frame, ps: dict[int, Path], roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    """z' lies in a."""
    x, _, z, w = roles
    a, c, e = frame.cl(x), frame.cl(z), frame.cl(w)
    zo = frame.out(z)
    if (hit := frame.owner(ps, zo)) is not None:
        branch, assembly = _anchored(frame, ps, roles, (z, zo), hit)
        yield f"Case2/Subcase2.3.1.{branch}", assembly
        return
    for u1 in ordered_neighbors(zo, frame.position).values():
        if (hit := frame.owner(ps, u1)) is not None:
            branch, assembly = _anchored(frame, ps, roles, (z, zo, u1), hit)
            yield f"Case2/Subcase2.3.2.{branch}", assembly
    u = frame.toward(zo, e)
    assembly = frame.assembly()
    _standard(frame, assembly, ps, roles, [*frame.symbols_except(a, c, e), c])
    te = _opened(frame, assembly, ps, e).path((z, zo, u, frame.out(u)))
    te.steiner(frame.cluster(e), [frame.out(ps[e][1]), frame.out(u), w])
    yield "Case2/Subcase2.3.2", assembly


def _plans(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    x, y, z, w = roles
    a, c, e = frame.cl(x), frame.cl(z), frame.cl(w)
    ps = frame.labelled_paths(x, y)
    others = frame.symbols_except(a, c, e)
    if frame.toward(w, c) != frame.end(z, e):
        assembly = frame.assembly()
        _standard(frame, assembly, ps, roles, [*others, c, e])
        yield "Case1", assembly
        return
    zo = frame.out(z)
    h = frame.cl(zo)
    if h == e:
        assembly = frame.assembly()
        _standard(frame, assembly, ps, roles, [*others, c])
        te = _opened(frame, assembly, ps, e).edge(z, zo)
        te.steiner(frame.cluster(e), [frame.out(ps[e][1]), zo, w])
        yield "Case2/Subcase2.2", assembly
    elif h == a:
        yield from _case23(frame, ps, roles)
    else:
        for p, q in ((zo, frame.end(z, h)), (frame.end(z, h), zo)):
            u = frame.toward(p, e)
            assembly = frame.assembly()
            _standard(frame, assembly, ps, roles, [*(d for d in others if d != h), c])
            te = _opened(frame, assembly, ps, e)
            frame.reach(te, z, p)
            te.edge(p, u).edge(u, frame.out(u))
            te.steiner(frame.cluster(e), [frame.out(ps[e][1]), w, frame.out(u)])
            th = _opened(frame, assembly, ps, h)
            frame.reach(th, z, q)
            th.path(frame.step(w, h))
            th.steiner(frame.cluster(h), [frame.out(ps[h][1]), q, frame.end(w, h)])
            yield "Case2/Subcase2.1", assembly


def lemma_s211(graph: CayleyGraph, terminals: Sequence[Permutation], m: int) -> SteinerTreeSet:
    """
    n-1 trees for a (2, 1, 1) split at position ``m``.

    Raises:
        PreconditionError: The terminals are not split (2, 1, 1) at ``m``.
        ConstructionError: No role assignment assembled into a verified set.
    """
    frame = Frame(graph, m, terminals)
    groups = list(frame.split().values())
    if [len(g) for g in groups] != [2, 1, 1]:
        raise PreconditionError(f"terminals are not split (2, 1, 1) at position {m}")
    pair, first, second = groups
    orders = [*role_orders([pair, first, second]), *role_orders([pair, second, first])]
    return run_roles(frame, Lemma.S211, orders, _plans)
