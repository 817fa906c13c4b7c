"""
Three terminals x, y, z in cluster a, the fourth terminal w in cluster b.

The case is decided by F, the subgraph induced on {x, y, z}:

- no edge: every other cluster c hosts one tree, reached through P[t, t_c'];
- one edge xy: split on whether x' and y' share a cluster (Subcases 2.1, 2.2);
  in 2.2 the tree of cl(y') leaves x through x' or x_j', and takes z through
  z_j when that vertex is already on its exit path;
- two edges xy, xz: split on where x', y' and z' land (Subcases 3.1.1 - 3.2.2);
- a triangle: {x, y, z} lies in one AN part, handled across the parts.

Notation in this module follows the frame: ``j`` is cl(y') or cl(x'), ``O`` the
clusters other than a and b, and "region c" is cluster c; vertices claimed by
the other trees are removed from it during assembly.
"""

from collections.abc import Iterator, Sequence

from attrs import evolve

from godan_idst.builder.frame import Frame, Roles, role_orders, run_roles
from godan_idst.builder.parts import ans3_applies, lemma_ans3, lemma_s4
from godan_idst.core.assembly import TreeAssembly, TreePlan
from godan_idst.core.exceptions import PreconditionError
from godan_idst.core.graphs import CayleyGraph, an_part_of
from godan_idst.core.permutations import Permutation
from godan_idst.dto.models import CaseTag, Lemma, SteinerTreeSet
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)


def _edges_of_trio(
    frame: Frame, trio: Sequence[Permutation]
) -> list[tuple[Permutation, Permutation]]:
    x, y, z = trio
    return [(u, v) for u, v in ((x, y), (x, z), (y, z)) if v in frame.graph.neighbors(u)]


def _target(frame: Frame, plan: TreePlan, t: Permutation, c: int) -> Permutation:
    """t itself when it lives in cluster c, else t_c' reached through P[t, t_c']."""
    if frame.cl(t) == c:
        return t
    plan.path(frame.step(t, c))
    return frame.end(t, c)


def _standard(frame: Frame, assembly: TreeAssembly, roles: Roles, skip: Sequence[int]) -> None:
    a, b = frame.cl(roles[0]), frame.cl(roles[3])
    for c in [*frame.symbols_except(a, b), b]:
        if c not in skip:
            frame.cluster_tree(assembly.plan(f"T{c}"), c, roles)


def base_layout(frame: Frame, roles: Roles) -> TreeAssembly:
    """One tree per cluster other than a; cluster b's tree contains w itself."""
    assembly = frame.assembly()
    _standard(frame, assembly, roles, skip=())
    return assembly


def _around(frame: Frame, plan: TreePlan, z: Permutation, j: int) -> Permutation:
    """z reaching cluster j through z' (and z'_j' when z' lies elsewhere)."""
    zo = frame.out(z)
    if frame.cl(zo) == j:
        plan.edge(z, zo)
        return zo
    v = frame.toward(zo, j)
    plan.path((z, zo, v, frame.out(v)))
    return frame.out(v)


def _exits(frame: Frame, x: Permutation, w: Permutation) -> list[tuple[Permutation, Permutation]]:
    """
    (p, q) pairs: T_k leaves x through p, T_j through q.

    x' comes first unless it is adjacent to w_j', in which case x_j' does.
    """
    xo = frame.out(x)
    j = frame.cl(xo)
    xj = frame.end(x, j)
    exits = [(xo, xj), (xj, xo)]
    if frame.end(w, j) in frame.graph.neighbors(xo):
        exits.reverse()
    return exits


def _case2(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    x, y, z, w = roles
    j, k, b = frame.cl(frame.out(x)), frame.cl(frame.out(y)), frame.cl(w)
    if j == k:
        assembly = frame.assembly()
        _standard(frame, assembly, roles, skip=(j,))
        plan = assembly.plan(f"T{j}").edge(x, frame.out(x)).edge(x, y)
        plan.path(frame.step(z, j))
        ends = [frame.out(x), frame.end(z, j), _target(frame, plan, w, j)]
        plan.steiner(frame.cluster(j), ends)
        yield "Case2/Subcase2.1", assembly
        return
    if j == b:
        raise PreconditionError("x' lies in b; the swapped role order handles it")
    for p, q in _exits(frame, x, w):
        branch = "Case2/Subcase2.2.1" if p == frame.out(x) else "Case2/Subcase2.2.2"
        u = frame.toward(p, k)
        for detour in (False, True):
            # T_k and T_j are solved before the per-cluster trees
            assembly = frame.assembly()
            tk = assembly.plan(f"T{k}")
            frame.reach(tk, x, p)
            tk.edge(p, u).edge(u, frame.out(u)).edge(y, frame.out(y))
            tj = assembly.plan(f"T{j}").edge(x, y)
            frame.reach(tj, x, q)
            k_ends = [frame.out(u), frame.out(y)]
            if detour:
                # z_j already sits on T_k's exit path
                zj = frame.toward(z, j)
                if zj not in tk.vertices:
                    continue
                tk.edge(z, zj)
                j_ends = [q, _around(frame, tj, z, j)]
            else:
                k_ends.append(_target(frame, tk, z, k))
                j_ends = [q, _target(frame, tj, z, j)]
            tk.steiner(frame.cluster(k), [*k_ends, _target(frame, tk, w, k)])
            tj.steiner(frame.cluster(j), [*j_ends, _target(frame, tj, w, j)])
            _standard(frame, assembly, roles, skip=(j, k))
            yield (f"{branch}/detour" if detour else branch), assembly


def _case31(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    """z' lies in b."""
    x, y, z, w = roles
    b = frame.cl(w)
    j, c = frame.cl(frame.out(y)), frame.cl(frame.out(x))
    if c == b:
        assembly = frame.assembly()
        _standard(frame, assembly, roles, skip=(j, b))
        tj = assembly.plan(f"T{j}").edge(x, z).edge(y, frame.out(y))
        tj.path(frame.step(z, j)).path(frame.step(w, j))
        tj.steiner(frame.cluster(j), [frame.out(y), frame.end(z, j), frame.end(w, j)])
        tb = assembly.plan(f"T{b}").edge(x, y).edge(x, frame.out(x)).edge(z, frame.out(z))
        tb.steiner(frame.cluster(b), [frame.out(x), frame.out(z), w])
        yield "Case3/Subcase3.1.1", assembly
    elif c == j:
        assembly = frame.assembly()
        _standard(frame, assembly, roles, skip=(j, b))
        tj = assembly.plan(f"T{j}").edge(x, frame.out(x)).edge(x, z).edge(y, frame.out(y))
        tj.path(frame.step(w, j))
        tj.steiner(frame.cluster(j), [frame.out(x), frame.out(y), frame.end(w, j)])
        tb = assembly.plan(f"T{b}").edge(x, y).edge(z, frame.out(z))
        tb.path(frame.step(y, b))
        tb.steiner(frame.cluster(b), [frame.end(y, b), frame.out(z), w])
        yield "Case3/Subcase3.1.2", assembly
    else:
        h = c
        v = frame.toward(frame.out(y), h)
        for p, q in ((frame.out(x), frame.end(x, h)), (frame.end(x, h), frame.out(x))):
            u = frame.toward(p, b)
            assembly = frame.assembly()
            _standard(frame, assembly, roles, skip=(h, j, b))
            th = assembly.plan(f"T{h}").edge(x, z)
            frame.reach(th, x, q)
            th.path((y, frame.out(y), v, frame.out(v))).path(frame.step(w, h))
            th.steiner(frame.cluster(h), [q, frame.out(v), frame.end(w, h)])
            tj = assembly.plan(f"T{j}").edge(x, y)
            frame.cluster_tree(tj, j, (y, z, w))
            tb = assembly.plan(f"T{b}").edge(z, frame.out(z))
            frame.reach(tb, x, p)
            tb.edge(p, u).edge(u, frame.out(u)).path(frame.step(y, b))
            tb.steiner(frame.cluster(b), [frame.end(y, b), frame.out(z), w, frame.out(u)])
            yield "Case3/Subcase3.1.3", assembly


def _case32(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    """Neither y' nor z' lies in b."""
    x, y, z, w = roles
    j, k, c = frame.cl(frame.out(y)), frame.cl(frame.out(z)), frame.cl(frame.out(x))
    if c == j:
        assembly = frame.assembly()
        _standard(frame, assembly, roles, skip=(j, k))
        tk = assembly.plan(f"T{k}").edge(x, y).edge(z, frame.out(z))
        tk.path(frame.step(y, k)).path(frame.step(w, k))
        tk.steiner(frame.cluster(k), [frame.end(y, k), frame.out(z), frame.end(w, k)])
        tj = assembly.plan(f"T{j}").edge(x, frame.out(x)).edge(x, z).edge(y, frame.out(y))
        tj.path(frame.step(w, j))
        tj.steiner(frame.cluster(j), [frame.out(x), frame.out(y), frame.end(w, j)])
        yield "Case3/Subcase3.2.1", assembly
        return
    if c == k:
        raise PreconditionError("x' shares z's out-cluster; the swapped role order handles it")
    h = c
    for py, qy in ((frame.out(y), frame.end(y, j)), (frame.end(y, j), frame.out(y))):
        for pz, qz in ((frame.out(z), frame.end(z, k)), (frame.end(z, k), frame.out(z))):
            u, v = frame.toward(py, h), frame.toward(pz, h)
            assembly = frame.assembly()
            _standard(frame, assembly, roles, skip=(h, j, k))
            tk = assembly.plan(f"T{k}").edge(x, z)
            frame.reach(tk, z, qz)
            tk.path(frame.step(y, k))
            tk.steiner(frame.cluster(k), [frame.end(y, k), qz, _target(frame, tk, w, k)])
            tj = assembly.plan(f"T{j}").edge(x, y)
            frame.reach(tj, y, qy)
            tj.path(frame.step(z, j))
            tj.steiner(frame.cluster(j), [qy, frame.end(z, j), _target(frame, tj, w, j)])
            th = assembly.plan(f"T{h}").edge(x, frame.out(x))
            frame.reach(th, y, py)
            frame.reach(th, z, pz)
            th.edge(py, u).edge(u, frame.out(u)).edge(pz, v).edge(v, frame.out(v))
            th.steiner(
                frame.cluster(h),
                [frame.out(x), frame.out(u), frame.out(v), _target(frame, th, w, h)],
            )
            yield "Case3/Subcase3.2.2", assembly


def _plans(frame: Frame, roles: Roles) -> Iterator[tuple[str, TreeAssembly]]:
    x, y, z, w = roles
    edges = _edges_of_trio(frame, (x, y, z))
    if not edges:
        yield "Case1", base_layout(frame, roles)
        return
    if len(edges) == 3:  # noqa: PLR2004
        raise PreconditionError("a triangle F is built across the AN parts")
    if len(edges) == 1:
        if edges[0] != (x, y):
            raise PreconditionError("the edge of F must join x and y")
        yield from _case2(frame, roles)
        return
    if (x, y) not in edges or (x, z) not in edges:
        raise PreconditionError("x must be the common end of both edges of F")
    if frame.cl(frame.out(z)) == frame.cl(w):
        yield from _case31(frame, roles)
    elif frame.cl(frame.out(y)) == frame.cl(w):
        raise PreconditionError("y' lies in b; the swapped role order handles it")
    else:
        yield from _case32(frame, roles)


def _triangle(graph: CayleyGraph, frame: Frame) -> SteinerTreeSet:
    terminals = frame.terminals
    outer = CaseTag(lemma=Lemma.S3, branch="Case4", position=frame.m)
    if len({an_part_of(s) for s in terminals}) == 1:
        inner = lemma_s4(graph, terminals, frame.m)
    elif ans3_applies(graph, terminals):
        inner = lemma_ans3(graph, terminals, frame.m)
    else:
        raise PreconditionError(
            "triangle terminals whose fourth terminal violates the 3+1 conditions"
        )
    return evolve(inner, case=outer.nested(inner.case))


def lemma_s3(graph: CayleyGraph, terminals: Sequence[Permutation], m: int) -> SteinerTreeSet:
    """
    n-1 trees for a (3, 1) split at position ``m``.

    Raises:
        PreconditionError: The terminals are not split (3, 1) at ``m``, or they
            form a triangle that fits neither AN-part construction.
        ConstructionError: No role assignment assembled into a verified set.
    """
    frame = Frame(graph, m, terminals)
    groups = list(frame.split().values())
    if [len(g) for g in groups] != [3, 1]:
        raise PreconditionError(f"terminals are not split (3, 1) at position {m}")
    trio, (w,) = groups
    if len(_edges_of_trio(frame, trio)) == 3:  # noqa: PLR2004
        return _triangle(graph, frame)
    return run_roles(frame, Lemma.S3, role_orders([trio, [w]]), _plans)
