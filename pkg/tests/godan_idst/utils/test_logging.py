import logging

import pytest
import structlog

from godan_idst.core.permutations import Permutation
from godan_idst.utils.logging import (
    add_worker,
    clear_context,
    get_logger,
    render_permutations,
    set_context,
    set_level,
)


@pytest.fixture(autouse=True)
def _clean_contextvars():
    """Ensure contextvars are clear before and after each test."""
    structlog.contextvars.clear_contextvars()
    yield
    structlog.contextvars.clear_contextvars()


def test_set_context():
    set_context(n=5, subset_index=17)
    ctx = structlog.contextvars.get_contextvars()
    assert ctx.get("n") == 5  # noqa: PLR2004
    assert ctx.get("subset_index") == 17  # noqa: PLR2004


def test_clear_context_specific_keys():
    set_context(n=4, subset_index=1, case_tag="S22/Case1")
    clear_context("n", "subset_index")
    ctx = structlog.contextvars.get_contextvars()
    assert "n" not in ctx
    assert "subset_index" not in ctx
    assert ctx.get("case_tag") == "S22/Case1"


def test_clear_context_all_keys():
    set_context(a="1", b="2")
    clear_context()
    assert not structlog.contextvars.get_contextvars()


def test_set_level_changes_root_logger():
    before = logging.getLogger().level
    try:
        set_level("DEBUG")
        assert logging.getLogger().level == logging.DEBUG
        set_level(logging.WARNING)
        assert logging.getLogger().level == logging.WARNING
    finally:
        logging.getLogger().setLevel(before)


def test_get_logger_binds_name():
    logger = get_logger("godan_idst.test")
    assert hasattr(logger, "info")
    assert hasattr(logger, "bind")


def test_render_permutations():
    terminals = (Permutation.parse("1234"), Permutation.parse("2341"))
    event = {
        "event": "built",
        "terminals": terminals,
        "vertex": terminals[0],
        "cut": frozenset(terminals),
        "n": 4,
    }
    rendered = render_permutations(None, "info", event)
    assert rendered["terminals"] == ["1234", "2341"]
    assert rendered["vertex"] == "1234"
    assert rendered["cut"] == ["1234", "2341"]
    assert rendered["n"] == 4  # noqa: PLR2004


def test_add_worker_only_in_child_processes():
    assert "worker" not in add_worker(None, "info", {"event": "x"})
