import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from godan_idst.builder import (
    build_idsts,
    lemma_ans3,
    lemma_s3,
    lemma_s4,
    lemma_s22,
    lemma_s211,
    lemma_s1111,
    left_translate,
)
from godan_idst.builder.frame import Frame, role_orders
from godan_idst.builder.parts import ans3_applies, ans3_split
from godan_idst.builder.split1111 import _layouts, case_branch, trigger, triggers
from godan_idst.core.exceptions import OrderMismatchError, PreconditionError
from godan_idst.core.graphs import an_part_of, build_godan, pairs, parity_neighbor
from godan_idst.core.permutations import Permutation
from godan_idst.core.verify import verify_idst
from godan_idst.dto.models import Lemma

p = Permutation.parse

EA4 = build_godan(4)


def _perms(*texts):
    return [p(s) for s in texts]


def _assert_valid(graph, result, lemma):
    assert result.case.lemma is lemma
    assert verify_idst(graph, result.trees, result.terminals, expected=graph.n - 1).overall


def test_frame_vocabulary(ea4):
    frame = Frame(ea4, 4, _perms("4123", "1234", "2341", "3412"))
    assert frame.terminals[0] == p("1234")
    assert frame.cl(p("1234")) == 4  # noqa: PLR2004
    assert frame.toward(p("1234"), 1) == p("2314")
    assert frame.end(p("1234"), 1) == p("3241")
    assert frame.shape() == (1, 1, 1, 1)
    assert frame.symbols_except(4) == [1, 2, 3]


def test_split_orders_groups(ea4):
    frame = Frame(ea4, 4, _perms("1234", "2134", "4321", "4312"))
    assert list(frame.split()) == [4, 1, 2]
    assert frame.shape() == (2, 1, 1)


def test_role_orders():
    a, b, c = _perms("123", "213", "321")
    assert list(role_orders([[b, a], [c]])) == [(a, b, c), (b, a, c)]


def test_lemma_s3(ea4):
    terminals = _perms("1234", "2134", "3124", "4321")
    _assert_valid(ea4, lemma_s3(ea4, terminals, 4), Lemma.S3)


def test_lemma_s3_triangle(ea4):
    # 1234, 2314 and 3124 form a triangle inside cluster 4
    terminals = _perms("1234", "2314", "3124", "4321")
    _assert_valid(ea4, lemma_s3(ea4, terminals, 4), Lemma.S3)


def test_lemma_s22(ea4):
    terminals = _perms("1234", "2134", "4321", "3421")
    _assert_valid(ea4, lemma_s22(ea4, terminals, 4), Lemma.S22)


def test_lemma_s211(ea4):
    terminals = _perms("1234", "2134", "4321", "4312")
    _assert_valid(ea4, lemma_s211(ea4, terminals, 4), Lemma.S211)


def test_lemma_s1111(ea4):
    terminals = _perms("1234", "2341", "3412", "4123")
    result = lemma_s1111(ea4, terminals, 4)
    _assert_valid(ea4, result, Lemma.S1111)


@pytest.mark.parametrize(
    ("lemma", "terminals"),
    [
        (lemma_s3, ("1234", "2134", "4321", "3421")),
        (lemma_s22, ("1234", "2134", "3124", "4321")),
        (lemma_s211, ("1234", "2341", "3412", "4123")),
        (lemma_s1111, ("1234", "2134", "4321", "4312")),
    ],
)
def test_split_preconditions(ea4, lemma, terminals):
    with pytest.raises(PreconditionError):
        lemma(ea4, _perms(*terminals), 4)


def test_lemma_s4_all_even(ea4):
    terminals = _perms("1234", "2314", "3124", "1342")
    assert {an_part_of(s) for s in terminals} == {1}
    result = lemma_s4(ea4, terminals, 4)
    _assert_valid(ea4, result, Lemma.S4)
    last = result.trees[-1]
    assert all(parity_neighbor(s) in last.vertices for s in terminals)


def test_lemma_s4_needs_one_part(ea4):
    with pytest.raises(PreconditionError):
        lemma_s4(ea4, _perms("1234", "2134", "3124", "1342"), 4)


def test_lemma_ans3(ea4):
    trio = _perms("1234", "2314", "3124")
    candidates = [
        w
        for w in ea4.vertices()
        if an_part_of(w) == 2 and ans3_applies(ea4, [*trio, w])  # noqa: PLR2004
    ]
    assert candidates
    terminals = [*trio, candidates[0]]
    split_trio, lone = ans3_split(terminals)
    assert lone == candidates[0]
    assert set(split_trio) == set(trio)
    _assert_valid(ea4, lemma_ans3(ea4, terminals, 4), Lemma.ANS3)


def test_ans3_conditions(ea4):
    trio = _perms("1234", "2314", "3124")
    # 2134 is the parity neighbor of 1234, itself a terminal
    assert not ans3_applies(ea4, [*trio, p("2134")])
    with pytest.raises(PreconditionError):
        ans3_split(_perms("1234", "2314", "2134", "1324"))


@pytest.mark.parametrize(
    ("others", "branch"),
    [
        # 2341, 3412 and 4123 all reach a neighbor of 1234 in two steps
        (("2341", "3412", "4123"), "Case1/Subcase1.3.2"),
        # 2143 is x' itself
        (("2143", "3421", "4312"), "Case1/Subcase1.3.1"),
        (("1243", "3421", "4312"), "Case2"),
    ],
)
def test_case_branch_at_n4(ea4, others, branch):
    x = p("1234")
    roles = (x, *_perms(*others))
    frame = Frame(ea4, 4, roles)
    assert case_branch(frame, roles) == branch
    assert (trigger(frame, roles) is None) == (branch == "Case2")


def test_case_branch_known_triggers_at_n6():
    ea6 = build_godan(6)
    roles = tuple(_perms("123456", "214635", "215364", "456123"))
    frame = Frame(ea6, 6, roles)
    assert {p("214635"), p("215364")} <= set(triggers(frame, roles))
    assert case_branch(frame, roles) == "Case1/Subcase1.1.1"


def test_hub_layouts_only_in_case1(ea4):
    x = p("1234")
    case1 = (x, *_perms("2341", "3412", "4123"))
    branches = [branch for branch, _ in _layouts(Frame(ea4, 4, case1), case1)]
    assert branches[0] == "Case1/Subcase1.3.2"
    assert "Case1/Subcase1.3.2/hub" in branches
    case2 = (x, *_perms("1243", "3421", "4312"))
    assert {branch for branch, _ in _layouts(Frame(ea4, 4, case2), case2)} <= {
        "Case2",
        "Case2/direct",
    }


def _one_edge_s3_sets(graph):
    for a in range(1, graph.n + 1):
        cluster = [v for v in graph.vertices() if v(graph.n) == a]
        rest = [v for v in graph.vertices() if v(graph.n) != a]
        for trio in itertools.combinations(cluster, 3):
            joined = [(u, v) for u, v in pairs(trio) if v in graph.neighbors(u)]
            if len(joined) == 1:
                for w in rest:
                    yield [*trio, w]


def test_lemma_s3_every_one_edge_set(ea4):
    sets = list(_one_edge_s3_sets(ea4))
    assert len(sets) == 432  # noqa: PLR2004
    for terminals in sets:
        result = lemma_s3(ea4, terminals, 4)
        _assert_valid(ea4, result, Lemma.S3)
        assert result.case.branch.startswith("Case2/Subcase2.")


@pytest.mark.parametrize(
    ("lemma", "kind", "terminals", "prefix"),
    [
        # one edge, 1234-2314
        (lemma_s3, Lemma.S3, ("1234", "2314", "1324", "4321"), "Case2/"),
        (lemma_s3, Lemma.S3, ("2134", "1324", "2314", "1243"), "Case2/"),
        # two edges meeting at 1234
        (lemma_s3, Lemma.S3, ("1234", "2134", "3124", "4321"), "Case3/"),
        (lemma_s3, Lemma.S3, ("1234", "2134", "3124", "3241"), "Case3/"),
        (lemma_s3, Lemma.S3, ("1234", "2314", "3124", "4321"), "Case4>S4"),
        (lemma_s22, Lemma.S22, ("1234", "2134", "4321", "3421"), "Case"),
        (lemma_s211, Lemma.S211, ("1234", "2134", "4321", "4312"), "Case"),
        (lemma_s1111, Lemma.S1111, ("1234", "2341", "3412", "4123"), "Case"),
    ],
)
def test_branches_by_shape(ea4, lemma, kind, terminals, prefix):
    result = lemma(ea4, _perms(*terminals), 4)
    _assert_valid(ea4, result, kind)
    assert result.case.branch.startswith(prefix)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(EA4.vertices()), min_size=4, max_size=4, unique=True))
def test_constructions_give_n_minus_one_trees(terminals):
    result = build_idsts(EA4, terminals, fallback=False)
    assert len(result) == EA4.n - 1
    assert not result.case.suspect
    assert "search" not in result.case.branch
    assert verify_idst(EA4, result.trees, terminals, expected=EA4.n - 1).overall


def test_left_translation_preserves_tree_sets(ea4):
    terminals = _perms("1234", "2341", "3412", "4123")
    result = lemma_s1111(ea4, terminals, 4)
    sigma = p("2413")
    moved = left_translate(ea4, sigma, result)
    assert len(moved) == len(result)
    assert verify_idst(ea4, moved.trees, moved.terminals, expected=3).overall
    assert left_translate(ea4, sigma, p("1234")) == sigma
    with pytest.raises(OrderMismatchError):
        left_translate(ea4, p("123"), p("1234"))
    with pytest.raises(TypeError):
        left_translate(ea4, sigma, "1234")
