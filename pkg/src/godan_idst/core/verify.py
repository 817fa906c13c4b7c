"""
Certification of tree sets, path families and the structural facts the
constructions rely on.

Every check lands in a `VerificationReport` entry instead of raising, so a
failing sweep row points at the exact property that broke.
"""

import itertools
import random
from collections.abc import Iterable, Sequence
from typing import Any

import networkx as nx

from godan_idst.config import settings
from godan_idst.core.connectivity import (
    PathFamily,
    family_is_valid,
    is_connected,
    local_connectivity,
    max_internally_disjoint_paths,
    vertex_connectivity,
)
from godan_idst.core.graphs import (
    GraphLike,
    an_part_of,
    as_view,
    build_alt_network,
    build_godan,
    cluster_view,
    cross_edges,
    factorial,
    induces_triangle,
    is_triangle,
    parity_neighbor,
)
from godan_idst.core.permutations import FIRST_DOUBLE_SWAP
from godan_idst.core.trees import Tree
from godan_idst.dto.models import VerificationReport
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)

EXHAUSTIVE_TRIANGLE_ORDER = 4
EXHAUSTIVE_PARITY_ORDER = 5
EXHAUSTIVE_KAPPA_ORDER = 4
EXHAUSTIVE_AN_KAPPA_ORDER = 5


def verify_stree(
    graph: GraphLike, tree: Tree, terminals: Iterable[Any], name: str = "tree"
) -> VerificationReport:
    """
    Check that ``tree`` is an S-tree of ``graph``.

    Checks: every edge exists, acyclic, connected, S covered.
    """
    terminal_set = set(terminals)
    report = VerificationReport(subject=name)
    absent = sorted(
        (u, v)
        for u, v in tree.edges
        if not (graph.has_vertex(u) and graph.has_vertex(v) and v in graph.neighbors(u))
    )
    report.add(
        f"{name}: edges present",
        not absent,
        f"edge absent: {absent[0][0]}-{absent[0][1]}" if absent else "",
    )
    g = tree.graph()
    report.add(f"{name}: acyclic", bool(tree.vertices) and nx.is_forest(g), "cycle found")
    report.add(f"{name}: connected", bool(tree.vertices) and nx.is_connected(g), "disconnected")
    missing = sorted(terminal_set - tree.vertices)
    report.add(
        f"{name}: S covered",
        not missing,
        f"S not covered: missing {', '.join(map(str, missing))}" if missing else "",
    )
    return report


def verify_idst(
    graph: GraphLike,
    trees: Sequence[Tree],
    terminals: Iterable[Any],
    *,
    expected: int | None = None,
    subject: str = "idst",
) -> VerificationReport:
    """
    Check that ``trees`` are internally disjoint S-trees.

    Each tree is checked with `verify_stree`; each pair must meet exactly in S
    and share no edge. ``expected`` adds a tree-count check.
    """
    terminal_set = frozenset(terminals)
    report = VerificationReport(subject=subject)
    if expected is not None:
        report.add("tree count", len(trees) == expected, f"{len(trees)} trees, expected {expected}")
    for index, tree in enumerate(trees):
        report.extend(verify_stree(graph, tree, terminal_set, name=f"T{index + 1}"))
    for (i, first), (j, second) in itertools.combinations(enumerate(trees), 2):
        shared = sorted((first.vertices & second.vertices) - terminal_set)
        report.add(
            f"T{i + 1}/T{j + 1}: vertices",
            not shared,
            f"internal vertex shared: {shared[0]}" if shared else "",
        )
        common = sorted(first.edges & second.edges)
        report.add(
            f"T{i + 1}/T{j + 1}: edges",
            not common,
            f"shared edges: {len(common)}" if common else "",
        )
    if not report.overall:
        logger.debug("tree set rejected", failures=[c.name for c in report.failures()])
    return report


def verify_path_family(
    view: GraphLike, family: PathFamily, subject: str = "paths"
) -> VerificationReport:
    report = VerificationReport(subject=subject)
    report.add(f"{family.kind} disjointness", family_is_valid(view, family), f"{len(family)} paths")
    return report


# ---- structural suite ----


def _sample(rng: random.Random, items: Sequence[Any], k: int) -> list[Any]:
    return list(items) if len(items) <= k else rng.sample(list(items), k)


def _check_counts(report: VerificationReport, graph: GraphLike, n: int) -> None:
    vertices = graph.vertices()
    report.add("vertex count", len(vertices) == factorial(n), f"{len(vertices)} vertices")
    degrees = [len(graph.neighbors(v)) for v in vertices]
    report.add("edge count", sum(degrees) == n * factorial(n), f"{sum(degrees) // 2} edges")
    irregular = next((v for v, d in zip(vertices, degrees, strict=True) if d != n), None)
    detail = f"{irregular} has degree != {n}" if irregular else ""
    report.add("regularity", irregular is None, detail)


def _check_parts(report: VerificationReport, graph: GraphLike, n: int, rng: random.Random) -> None:
    vertices = graph.vertices()
    bad = None
    for v in vertices:
        across = [u for u in graph.neighbors(v) if an_part_of(u) != an_part_of(v)]
        if across != [parity_neighbor(v)]:
            bad = v
            break
    report.add("part matching", bad is None, f"{bad} breaks the matching" if bad else "")
    exhaustive = n <= EXHAUSTIVE_PARITY_ORDER
    pool = vertices if exhaustive else _sample(rng, vertices, settings.SUITE.PAIR_SAMPLES)
    bad = None
    for x in pool:
        inside = {parity_neighbor(b) for b in graph.neighbors(x) if an_part_of(b) == an_part_of(x)}
        xt = parity_neighbor(x)
        mirrored = {b for b in graph.neighbors(xt) if an_part_of(b) == an_part_of(xt)}
        if inside != mirrored:
            bad = x
            break
    report.add("parity-neighbor adjacency", bad is None, f"fails at {bad}" if bad else "")


def _check_clusters(report: VerificationReport, graph: GraphLike, n: int) -> None:
    expected = factorial(n - 2)
    wrong = []
    for m in range(FIRST_DOUBLE_SWAP, n + 1):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            count = len(cross_edges(graph, m, i, j))
            if count != expected:
                wrong.append(f"({m}:{i})-({m}:{j})={count}")
    report.add("cross edges", not wrong, "; ".join(wrong[:3]))


def _check_triangles(
    report: VerificationReport, graph: GraphLike, n: int, rng: random.Random
) -> None:
    vertices = graph.vertices()
    pool = (
        vertices
        if n <= EXHAUSTIVE_TRIANGLE_ORDER
        else _sample(rng, vertices, settings.SUITE.TRIANGLE_SAMPLES)
    )
    bad = None
    for x in pool:
        for y, z in itertools.combinations(graph.neighbors(x), 2):
            if induces_triangle(graph, x, y, z) != is_triangle(x, y, z):
                bad = (x, y, z)
                break
        if bad:
            break
    report.add("triangle characterization", bad is None, f"fails at {bad}" if bad else "")


def _check_menger(
    report: VerificationReport,
    name: str,
    view: GraphLike,
    target: int,
    exhaustive: bool,
    rng: random.Random,
) -> None:
    if exhaustive:
        value = vertex_connectivity(view)
        report.add(name, value == target, f"kappa = {value}, expected {target}")
        pairs = list(itertools.combinations(view.vertices(), 2))
    else:
        vertices = view.vertices()
        pairs = [tuple(rng.sample(vertices, 2)) for _ in range(settings.SUITE.PAIR_SAMPLES)]
    duality = True
    low = None
    for x, y in pairs:
        if y in view.neighbors(x):
            continue
        family, cut = max_internally_disjoint_paths(view, x, y)
        if cut is None or len(family) != len(cut):
            duality = False
        if not exhaustive and len(family) < target:
            low = (x, y)
    if not exhaustive:
        detail = f"pair {low} below {target}" if low else f"{len(pairs)} sampled pairs"
        report.add(name, low is None, detail)
    report.add(f"{name}: menger duality", duality, "paths != cut" if not duality else "")


def _check_deletions(report: VerificationReport, graph: GraphLike, rng: random.Random) -> None:
    vertices = graph.vertices()
    view = as_view(graph)
    bad = None
    for _ in range(settings.SUITE.DELETION_SAMPLES):
        x = rng.choice(vertices)
        xt = parity_neighbor(x)
        inside = [b for b in graph.neighbors(x) if b != xt]
        dropped = rng.choice(inside)
        v = rng.choice([u for u in graph.neighbors(xt) if u != x])
        deleted = [b for b in inside if b != dropped] + [xt, v]
        if not is_connected(view.without(*deleted)):
            bad = (x, v)
            break
    report.add("deletion connectivity", bad is None, f"disconnected for {bad}" if bad else "")


def _check_cluster_unions(
    report: VerificationReport, graph: GraphLike, n: int, rng: random.Random
) -> None:
    symbols = list(range(1, n + 1))
    if n <= EXHAUSTIVE_KAPPA_ORDER:
        unions = [
            (m, pair)
            for m in range(FIRST_DOUBLE_SWAP, n + 1)
            for pair in itertools.combinations(symbols, 2)
        ]
    else:
        unions = []
        for _ in range(settings.SUITE.CLUSTER_UNION_SAMPLES):
            h = rng.randint(2, n)
            chosen = tuple(sorted(rng.sample(symbols, h)))
            unions.append((rng.randint(FIRST_DOUBLE_SWAP, n), chosen))
    bad = None
    for m, chosen in unions:
        union = cluster_view(graph, m, chosen)
        if n <= EXHAUSTIVE_KAPPA_ORDER:
            ok = vertex_connectivity(union) >= n - 2
        else:
            vertices = union.vertices()
            ok = True
            for _ in range(10):
                x, y = rng.sample(vertices, 2)
                if y not in union.neighbors(x) and local_connectivity(union, x, y) < n - 2:
                    ok = False
                    break
        if not ok:
            bad = (m, chosen)
            break
    report.add("cluster-union connectivity", bad is None, f"kappa < n-2 for {bad}" if bad else "")


def structural_suite(
    n: int, graph: GraphLike | None = None, *, seed: int | None = None
) -> VerificationReport:
    """
    Machine-check the structural facts about EA_n used by the constructions.

    Args:
        n: Graph order (3 <= n <= 6).
        graph: Replacement graph for negative controls (e.g. EA_n with an edge removed).
        seed: Seed for the sampled checks; defaults to ``SWEEP.SEED``.

    Returns:
        VerificationReport: One entry per property.
    """
    graph = graph if graph is not None else build_godan(n)
    rng = random.Random(settings.SWEEP.SEED if seed is None else seed)
    report = VerificationReport(subject=f"structure EA_{n}")
    _check_counts(report, graph, n)
    _check_parts(report, graph, n, rng)
    _check_triangles(report, graph, n, rng)
    view = as_view(graph)
    _check_menger(report, f"kappa(EA_{n})", view, n, n <= EXHAUSTIVE_KAPPA_ORDER, rng)
    alt = build_alt_network(n).view()
    _check_menger(report, f"kappa(AN_{n})", alt, n - 1, n <= EXHAUSTIVE_AN_KAPPA_ORDER, rng)
    if n >= FIRST_DOUBLE_SWAP:
        _check_clusters(report, graph, n)
        _check_deletions(report, graph, rng)
        _check_cluster_unions(report, graph, n, rng)
    logger.info("structural suite finished", n=n, overall=report.overall, checks=len(report.checks))
    return report
