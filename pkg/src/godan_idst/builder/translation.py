"""
Left translations v -> σ∘v.

Left multiplication is an automorphism of every right Cayley graph, and it
commutes with the right action of the generators, so it maps cluster (m, i) to
cluster (m, σ(i)) and out-neighbors to out-neighbors.
"""

from functools import singledispatch
from typing import Any

from godan_idst.core.exceptions import OrderMismatchError
from godan_idst.core.graphs import CayleyGraph
from godan_idst.core.permutations import Permutation, compose
from godan_idst.core.trees import Tree
from godan_idst.dto.models import SteinerTreeSet


@singledispatch
def _translate(obj: Any, sigma: Permutation) -> Any:
    if isinstance(obj, tuple | list | frozenset | set):
        return type(obj)(_translate(item, sigma) for item in obj)
    raise TypeError(f"cannot translate {type(obj).__name__}")


@_translate.register
def _(obj: Permutation, sigma: Permutation) -> Permutation:
    return compose(sigma, obj)


@_translate.register
def _(obj: Tree, sigma: Permutation) -> Tree:
    return obj.map(lambda v: compose(sigma, v))


@_translate.register
def _(obj: SteinerTreeSet, sigma: Permutation) -> SteinerTreeSet:
    return obj.map(lambda v: compose(sigma, v))


def left_translate(graph: CayleyGraph, sigma: Permutation, obj: Any) -> Any:
    """
    Translate a vertex, an edge or vertex collection, a tree or a tree set by ``sigma``.

    Raises:
        OrderMismatchError: ``sigma`` is not a permutation of the graph's order.
    """
    if sigma.n != graph.n:
        raise OrderMismatchError(
            f"cannot translate EA_{graph.n} by a permutation of order {sigma.n}"
        )
    return _translate(obj, sigma)
