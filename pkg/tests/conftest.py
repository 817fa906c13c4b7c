import pytest

from godan_idst.config import settings
from godan_idst.core.graphs import build_alt_network, build_godan


@pytest.fixture
def ea3():
    return build_godan(3)


@pytest.fixture
def ea4():
    return build_godan(4)


@pytest.fixture
def ea5():
    return build_godan(5)


@pytest.fixture
def an4():
    return build_alt_network(4)


@pytest.fixture
def env(monkeypatch):
    """monkeypatch for GODAN_* variables; settings are reloaded once they are undone."""
    yield monkeypatch
    monkeypatch.undo()
    settings.reload()
