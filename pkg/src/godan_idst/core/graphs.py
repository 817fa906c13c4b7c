"""
Godan graphs EA_n, alternating group networks AN_n and subgraph views.

EA_n is the right Cayley graph of S_n with connection set Ω*; AN_n is the right
Cayley graph of A_n with connection set Ω. Adjacency is computed from the
generators on demand and memoized per vertex.

Fixing a position ``m`` (4 ≤ m ≤ n) splits EA_n into n clusters EA_n^{m:i}, the
vertices whose position-``m`` symbol is ``i``. Inside a cluster a vertex keeps
every generator except ``(12)(3m)``; that generator is its single out-edge.

Every connectivity primitive runs on a `SubgraphView`, which is a base graph with
deleted vertices and an optional membership predicate. Views over views are
flattened into a single deletion set and a single predicate.
"""

import itertools
import math
from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from functools import cache
from typing import Any, Protocol, TypeVar

import networkx as nx
from attrs import define, field, validators

from godan_idst.core.exceptions import (
    ClusterError,
    GraphSizeError,
    InternalConsistencyError,
    NonDistinctVerticesError,
    VertexAbsentError,
)
from godan_idst.core.permutations import (
    FIRST_DOUBLE_SWAP,
    MIN_ORDER,
    GeneratorTag,
    Parity,
    Permutation,
    compose,
    omega,
    omega_star,
    parity,
)

V = TypeVar("V", bound=Hashable)
Edge = tuple[Any, Any]

EVEN_PART = 1
ODD_PART = 2


class GraphLike(Protocol):
    """Read interface shared by Cayley graphs, edge-list graphs and views."""

    def vertices(self) -> tuple[Any, ...]: ...

    def has_vertex(self, v: Any) -> bool: ...

    def neighbors(self, v: Any) -> tuple[Any, ...]: ...


def edge(u: Any, v: Any) -> Edge:
    """Canonical (sorted) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


def _edges_of(graph: GraphLike) -> tuple[Edge, ...]:
    found = []
    for u in graph.vertices():
        for v in graph.neighbors(u):
            if u < v:
                found.append((u, v))
    found.sort()
    return tuple(found)


class CayleyGraph:
    """Common machinery for EA_n and AN_n."""

    name = "cayley"

    def __init__(self, n: int, generators: tuple[GeneratorTag, ...]) -> None:
        if n < MIN_ORDER:
            raise GraphSizeError(f"n must be at least {MIN_ORDER}, got {n}")
        self.n = n
        self.generators = generators
        self._generator_perms = tuple(g.permutation(n) for g in generators)
        self._adjacency: dict[Permutation, tuple[Permutation, ...]] = {}
        self._vertices: tuple[Permutation, ...] | None = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"

    def _member(self, v: Permutation) -> bool:
        return True

    def has_vertex(self, v: Any) -> bool:
        return isinstance(v, Permutation) and v.n == self.n and self._member(v)

    def vertices(self) -> tuple[Permutation, ...]:
        if self._vertices is None:
            # itertools.permutations emits lexicographic order, which is rank order.
            self._vertices = tuple(
                p
                for p in (
                    Permutation(image) for image in itertools.permutations(range(1, self.n + 1))
                )
                if self._member(p)
            )
        return self._vertices

    def neighbors(self, v: Any) -> tuple[Permutation, ...]:
        cached = self._adjacency.get(v)
        if cached is not None:
            return cached
        if not self.has_vertex(v):
            raise VertexAbsentError(f"{v} is not a vertex of {self!r}")
        result = tuple(sorted(compose(v, s) for s in self._generator_perms))
        self._adjacency[v] = result
        return result

    def is_edge(self, u: Any, v: Any) -> bool:
        return self.has_vertex(u) and self.has_vertex(v) and v in self.neighbors(u)

    def degree(self, v: Any) -> int:
        return len(self.neighbors(v))

    def edges(self) -> tuple[Edge, ...]:
        return _edges_of(self)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices())

    @property
    def num_edges(self) -> int:
        return sum(len(self.neighbors(v)) for v in self.vertices()) // 2

    def view(self) -> "SubgraphView":
        return SubgraphView(self, label=repr(self))


class GodanGraph(CayleyGraph):
    """EA_n: n-regular on n! vertices."""

    name = "EA"

    def __init__(self, n: int) -> None:
        super().__init__(n, omega_star(n) if n >= MIN_ORDER else ())


class AltNetwork(CayleyGraph):
    """AN_n: (n-1)-regular on the n!/2 even permutations."""

    name = "AN"

    def __init__(self, n: int) -> None:
        super().__init__(n, omega(n) if n >= MIN_ORDER else ())

    def _member(self, v: Permutation) -> bool:
        return parity(v) is Parity.EVEN


@cache
def build_godan(n: int) -> GodanGraph:
    return GodanGraph(n)


@cache
def build_alt_network(n: int) -> AltNetwork:
    return AltNetwork(n)


class AdjacencyGraph:
    """
    A small undirected graph given by an edge list.

    Used for graphs outside the Cayley family: test fixtures such as K_{1,3} and
    mutated copies of EA_n for negative controls. Vertices must be mutually
    orderable.
    """

    name = "adjacency"

    def __init__(self, edges: Iterable[Edge], vertices: Iterable[Any] = ()) -> None:
        adjacency: dict[Any, set[Any]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise NonDistinctVerticesError(f"self-loop at {u}")
            adjacency.setdefault(u, set()).add(v)
            adjacency.setdefault(v, set()).add(u)
        self._vertices = tuple(sorted(adjacency))
        self._adjacency = {v: tuple(sorted(nbrs)) for v, nbrs in adjacency.items()}

    @classmethod
    def copy_of(cls, graph: GraphLike, *, drop: Iterable[Edge] = ()) -> "AdjacencyGraph":
        """Copy any graph, optionally removing some edges."""
        dropped = {edge(u, v) for u, v in drop}
        return cls(
            (e for e in _edges_of(graph) if e not in dropped),
            vertices=graph.vertices(),
        )

    def vertices(self) -> tuple[Any, ...]:
        return self._vertices

    def has_vertex(self, v: Any) -> bool:
        return v in self._adjacency

    def neighbors(self, v: Any) -> tuple[Any, ...]:
        try:
            return self._adjacency[v]
        except KeyError:
            raise VertexAbsentError(f"{v} is not a vertex") from None

    def is_edge(self, u: Any, v: Any) -> bool:
        return u in self._adjacency and v in self._adjacency[u]

    def degree(self, v: Any) -> int:
        return len(self.neighbors(v))

    def edges(self) -> tuple[Edge, ...]:
        return _edges_of(self)

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self._adjacency.values()) // 2


Predicate = Callable[[Any], bool]


def _both(first: Predicate | None, second: Predicate | None) -> Predicate | None:
    if first is None:
        return second
    if second is None:
        return first
    return lambda v: first(v) and second(v)


class SubgraphView:
    """
    A graph restricted by deleted vertices and an allowed-vertex predicate.

    A vertex is present iff the base graph has it, it is not deleted and the
    predicate accepts it; edges are the base edges with both ends present.
    """

    __slots__ = ("_vertices", "allowed", "base", "deleted", "label")

    def __init__(
        self,
        base: GraphLike,
        deleted: Iterable[Any] = (),
        allowed: Predicate | None = None,
        label: str = "",
    ) -> None:
        deleted_set = frozenset(deleted)
        if isinstance(base, SubgraphView):
            deleted_set |= base.deleted
            allowed = _both(base.allowed, allowed)
            label = label or base.label
            base = base.base
        self.base = base
        self.deleted = deleted_set
        self.allowed = allowed
        self.label = label
        self._vertices: tuple[Any, ...] | None = None

    def __repr__(self) -> str:
        return f"SubgraphView({self.label or self.base!r}, deleted={len(self.deleted)})"

    def has_vertex(self, v: Any) -> bool:
        if v in self.deleted or not self.base.has_vertex(v):
            return False
        return self.allowed is None or self.allowed(v)

    __contains__ = has_vertex

    def vertices(self) -> tuple[Any, ...]:
        if self._vertices is None:
            self._vertices = tuple(
                v
                for v in self.base.vertices()
                if v not in self.deleted and (self.allowed is None or self.allowed(v))
            )
        return self._vertices

    def neighbors(self, v: Any) -> tuple[Any, ...]:
        if not self.has_vertex(v):
            raise VertexAbsentError(f"{v} is not present in {self!r}")
        return tuple(u for u in self.base.neighbors(v) if self.has_vertex(u))

    def is_edge(self, u: Any, v: Any) -> bool:
        return self.has_vertex(u) and self.has_vertex(v) and v in self.base.neighbors(u)

    def degree(self, v: Any) -> int:
        return len(self.neighbors(v))

    def edges(self) -> tuple[Edge, ...]:
        return _edges_of(self)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices())

    @property
    def num_edges(self) -> int:
        return len(self.edges())

    def without(self, *vertices: Any, label: str = "") -> "SubgraphView":
        """Delete vertices (absent ones are ignored)."""
        return SubgraphView(self, deleted=vertices, label=label)

    def restrict(self, predicate: Predicate, label: str = "") -> "SubgraphView":
        return SubgraphView(self, allowed=predicate, label=label)

    def induced(self, vertices: Iterable[Any], label: str = "") -> "SubgraphView":
        keep = frozenset(vertices)
        return SubgraphView(self, allowed=keep.__contains__, label=label)

    def component_of(self, v: Any) -> set[Any]:
        if not self.has_vertex(v):
            raise VertexAbsentError(f"{v} is not present in {self!r}")
        return set(nx.node_connected_component(to_networkx(self), v))

    def is_connected(self) -> bool:
        return bool(self.vertices()) and nx.is_connected(to_networkx(self))


def to_networkx(graph: GraphLike) -> nx.Graph:
    """The graph as an `nx.Graph` on the same vertex objects."""
    g = nx.Graph()
    g.add_nodes_from(graph.vertices())
    g.add_edges_from(_edges_of(graph))
    return g


def as_view(graph: GraphLike) -> SubgraphView:
    return graph if isinstance(graph, SubgraphView) else SubgraphView(graph)


def neighbors(view: GraphLike, v: Any) -> frozenset[Any]:
    """N(v) inside the view; raises `VertexAbsentError` when v is absent."""
    return frozenset(view.neighbors(v))


# ---- parity and clusters ----


@define(frozen=True, order=True)
class ClusterRef:
    """
    The cluster EA_n^{m:i}: vertices whose position-``m`` symbol is ``i``.

    Attributes:
        position (int): The position ``m`` (4 ≤ m ≤ n).
        symbol (int): The symbol ``i`` (1 ≤ i ≤ n).
    """

    position: int = field(validator=validators.ge(FIRST_DOUBLE_SWAP))
    symbol: int = field(validator=validators.ge(1))

    def __str__(self) -> str:
        return f"({self.position}:{self.symbol})"

    def contains(self, v: Permutation) -> bool:
        return v(self.position) == self.symbol


def check_position(n: int, m: int) -> None:
    if not FIRST_DOUBLE_SWAP <= m <= n:
        raise ClusterError(f"cluster position must satisfy 4 <= m <= {n}, got {m}")


def parity_neighbor(v: Permutation) -> Permutation:
    """x̃ = x ∘ (12), the neighbor in the other AN part."""
    image = v.image
    return Permutation((image[1], image[0], *image[2:]))


def out_neighbor(v: Permutation, m: int) -> Permutation:
    """x' = x ∘ (12)(3m), the unique neighbor outside x's position-m cluster."""
    check_position(v.n, m)
    image = list(v.image)
    image[0], image[1] = image[1], image[0]
    image[2], image[m - 1] = image[m - 1], image[2]
    return Permutation(tuple(image))


def cluster_of(v: Permutation, m: int) -> ClusterRef:
    check_position(v.n, m)
    return ClusterRef(m, v(m))


@cache
def in_cluster_generators(n: int, m: int) -> tuple[Permutation, ...]:
    """The n-1 generators of Ω* that fix position m."""
    check_position(n, m)
    return tuple(
        g.permutation(n) for g in omega_star(n) if g != GeneratorTag.double_swap(m)
    )


def ordered_neighbors(v: Permutation, m: int) -> dict[int, Permutation]:
    """
    Label the in-cluster neighbors of ``v`` by the cluster their out-neighbor lies in.

    Returns:
        dict[int, Permutation]: ``j -> x_j`` for every symbol ``j`` other than ``v(m)``.
    """
    check_position(v.n, m)
    labelled: dict[int, Permutation] = {}
    for s in in_cluster_generators(v.n, m):
        x = compose(v, s)
        labelled[out_neighbor(x, m)(m)] = x
    expected = set(range(1, v.n + 1)) - {v(m)}
    if set(labelled) != expected:
        raise InternalConsistencyError(
            f"neighbor ordering of {v} at position {m} is not a bijection"
        )
    return dict(sorted(labelled.items()))


def two_step_path(v: Permutation, j: int, m: int) -> tuple[Permutation, Permutation, Permutation]:
    """P[v, v_j']: ``v - v_j - v_j'`` ending in cluster (m, j)."""
    check_position(v.n, m)
    if j == v(m):
        raise ClusterError(f"{v} already lies in cluster ({m}:{j})")
    if not 1 <= j <= v.n:
        raise ClusterError(f"symbol {j} out of range for n={v.n}")
    x = ordered_neighbors(v, m)[j]
    return (v, x, out_neighbor(x, m))


def cross_edges(graph: GraphLike, m: int, i: int, j: int) -> tuple[Edge, ...]:
    """All edges between clusters (m, i) and (m, j)."""
    if i == j:
        raise ClusterError("cross_edges needs two different clusters")
    found = set()
    for v in graph.vertices():
        if v(m) != i:
            continue
        for u in graph.neighbors(v):
            if u(m) == j:
                found.add(edge(u, v))
    return tuple(sorted(found))


def is_triangle(x: Permutation, y: Permutation, z: Permutation) -> bool:
    """True iff {y, z} = {x∘(123), x∘(132)}, the characterization of triangles in EA_n."""
    if len({x, y, z}) != 3:  # noqa: PLR2004
        raise NonDistinctVerticesError("is_triangle needs three distinct vertices")
    n = x.n
    return {y, z} == {
        compose(x, GeneratorTag.cycle123().permutation(n)),
        compose(x, GeneratorTag.cycle132().permutation(n)),
    }


def induces_triangle(graph: GraphLike, x: Any, y: Any, z: Any) -> bool:
    """True iff x, y, z are pairwise adjacent in the graph."""
    return (
        y in graph.neighbors(x) and z in graph.neighbors(x) and z in graph.neighbors(y)
    )


def cluster_view(
    graph: GraphLike, m: int, symbols: Iterable[int], label: str = ""
) -> SubgraphView:
    """The union of the clusters (m, i) for the given symbols."""
    keep = frozenset(symbols)
    return SubgraphView(
        graph,
        allowed=lambda v: v(m) in keep,
        label=label or f"clusters {m}:{sorted(keep)}",
    )


@define(frozen=True)
class ClusterMap:
    """
    An explicit isomorphism between cluster (m, i) of EA_n and EA_{n-1}.

    The map first swaps positions m and n (conjugating the in-cluster generators
    onto those of EA_{n-1}), then relabels symbols by the order-preserving bijection
    [n] ∖ {i} → [n-1] and drops the last position. Both steps preserve adjacency:
    the first because (m n)(12)(3j)(m n) is again a double swap fixing n, the second
    because left multiplication is an automorphism of a right Cayley graph.
    """

    cluster: ClusterRef
    n: int

    def to_small(self, v: Permutation) -> Permutation:
        m, i = self.cluster.position, self.cluster.symbol
        if v.n != self.n or v(m) != i:
            raise ClusterError(f"{v} is not in cluster {self.cluster}")
        image = list(v.image)
        image[m - 1], image[self.n - 1] = image[self.n - 1], image[m - 1]
        return Permutation(tuple(s if s < i else s - 1 for s in image[:-1]))

    def to_large(self, p: Permutation) -> Permutation:
        m, i = self.cluster.position, self.cluster.symbol
        if p.n != self.n - 1:
            raise ClusterError(f"{p} is not a vertex of EA_{self.n - 1}")
        image = [s if s < i else s + 1 for s in p.image]
        image.append(i)
        image[m - 1], image[self.n - 1] = image[self.n - 1], image[m - 1]
        return Permutation(tuple(image))


def cluster_isomorphism(cluster: ClusterRef, n: int) -> ClusterMap:
    check_position(n, cluster.position)
    if not 1 <= cluster.symbol <= n:
        raise ClusterError(f"symbol {cluster.symbol} out of range for n={n}")
    return ClusterMap(cluster, n)


def an_part_of(v: Permutation) -> int:
    """1 for A_n (even), 2 for the odd coset."""
    return EVEN_PART if parity(v) is Parity.EVEN else ODD_PART


def an_part_view(graph: GraphLike, part: int) -> SubgraphView:
    if part not in (EVEN_PART, ODD_PART):
        raise ClusterError(f"AN part must be 1 or 2, got {part}")
    return SubgraphView(
        graph, allowed=lambda v: an_part_of(v) == part, label=f"AN part {part}"
    )


def factorial(n: int) -> int:
    return math.factorial(n)


def pairs(items: Sequence[V]) -> Iterator[tuple[V, V]]:
    return itertools.combinations(items, 2)
