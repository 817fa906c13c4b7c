"""
Graph and tree-set dumps.

JSON goes through the marshmallow schemas in `godan_idst.dto.models`; DOT is
rendered here as plain text. Tree-set DOT draws every tree in its own color
and groups the vertices into one ``subgraph cluster_i`` per cluster at the
chosen position.
"""

import json
from collections.abc import Iterable
from typing import Any

from godan_idst.core.graphs import CayleyGraph, Edge, cluster_of
from godan_idst.dto.models import GraphDumpSchema, SteinerTreeSet, SteinerTreeSetSchema

PALETTE = (
    "red",
    "blue",
    "darkgreen",
    "orange",
    "purple",
    "brown",
    "magenta",
    "cyan4",
)
INDENT = "    "


def tree_color(index: int) -> str:
    return PALETTE[index % len(PALETTE)]


def _quote(v: Any) -> str:
    return f'"{v}"'


def _edge_line(u: Any, v: Any, attributes: Iterable[str] = ()) -> str:
    line = f"{INDENT}{_quote(u)} -- {_quote(v)}"
    attrs = list(attributes)
    if attrs:
        line += f" [{', '.join(attrs)}]"
    return line + ";"


def graph_to_json(graph: CayleyGraph) -> str:
    payload = {
        "graph": graph.name,
        "n": graph.n,
        "vertices": list(graph.vertices()),
        "edges": list(graph.edges()),
    }
    return json.dumps(GraphDumpSchema().dump(payload), indent=2)


def graph_to_dot(graph: CayleyGraph) -> str:
    """An undirected DOT graph named after ``graph`` with every edge once."""
    lines = [f"graph {graph.name}{graph.n} {{", f"{INDENT}node [shape=box];"]
    lines.extend(f"{INDENT}{_quote(v)};" for v in graph.vertices())
    lines.extend(_edge_line(u, v) for u, v in graph.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_set_to_json(tree_set: SteinerTreeSet) -> str:
    return json.dumps(SteinerTreeSetSchema().dump(tree_set), indent=2)


def tree_set_to_dot(tree_set: SteinerTreeSet, *, position: int | None = None) -> str:
    """
    DOT for a tree set: terminals are filled, tree edges carry the tree's color
    and label, vertices sit in the cluster subgraph of their position-``m`` symbol.
    """
    m = position or tree_set.n
    owned: dict[Edge, int] = {}
    vertices: set[Any] = set(tree_set.terminals)
    for index, tree in enumerate(tree_set.trees):
        vertices |= tree.vertices
        for e in tree.edges:
            owned[e] = index
    groups: dict[int, list[Any]] = {}
    for v in sorted(vertices):
        groups.setdefault(cluster_of(v, m).symbol, []).append(v)
    terminals = set(tree_set.terminals)
    lines = [
        f"graph idst_{tree_set.n} {{",
        f'{INDENT}label="{tree_set.case}";',
        f"{INDENT}node [shape=box];",
    ]
    for symbol, members in sorted(groups.items()):
        lines.append(f"{INDENT}subgraph cluster_{symbol} {{")
        lines.append(f'{INDENT * 2}label="m={m}:{symbol}";')
        for v in members:
            style = " [style=filled, fillcolor=lightgrey]" if v in terminals else ""
            lines.append(f"{INDENT * 2}{_quote(v)}{style};")
        lines.append(f"{INDENT}}}")
    for e, index in sorted(owned.items()):
        attributes = [f"color={tree_color(index)}", f'label="T{index + 1}"']
        lines.append(_edge_line(*e, attributes))
    lines.append("}")
    return "\n".join(lines) + "\n"
