import json

import pytest

from godan_idst.builder import build_idsts
from godan_idst.core.permutations import Permutation
from godan_idst.export import (
    graph_to_dot,
    graph_to_json,
    tree_color,
    tree_set_to_dot,
    tree_set_to_json,
)

p = Permutation.parse


@pytest.fixture
def spread_set(ea4):
    terminals = [p(s) for s in ("1234", "2341", "3412", "4123")]
    return build_idsts(ea4, terminals, fallback=False)


def test_graph_to_dot(ea4):
    text = graph_to_dot(ea4)
    assert text.startswith("graph EA4 {")
    assert text.rstrip().endswith("}")
    assert text.count(" -- ") == ea4.num_edges
    assert '"1234";' in text


def test_graph_to_json(ea3):
    data = json.loads(graph_to_json(ea3))
    assert data["n"] == 3  # noqa: PLR2004
    assert data["vertices"][0] == "123"
    assert ["123", "213"] in data["edges"]


def test_tree_set_to_dot(spread_set):
    text = tree_set_to_dot(spread_set)
    assert text.startswith("graph idst_4 {")
    assert f'label="{spread_set.case}";' in text
    # one cluster per symbol at position 4
    assert text.count("subgraph cluster_") == 4  # noqa: PLR2004
    assert text.count("style=filled") == 4  # noqa: PLR2004
    for index in range(3):
        assert f'label="T{index + 1}"' in text
        assert f"color={tree_color(index)}" in text
    edges = sum(len(tree.edges) for tree in spread_set.trees)
    assert text.count(" -- ") == edges


def test_tree_set_to_json(spread_set):
    data = json.loads(tree_set_to_json(spread_set))
    assert data["S"] == ["1234", "2341", "3412", "4123"]
    assert len(data["trees"]) == 3  # noqa: PLR2004


def test_palette_wraps():
    assert tree_color(0) == tree_color(8)
    assert tree_color(0) != tree_color(1)
