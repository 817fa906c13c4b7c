from godan_idst.config import settings


def test_defaults():
    assert settings.BUILDER.FALLBACK_SEARCH is False
    assert settings.CLI.FALLBACK_SEARCH is True
    assert settings.SWEEP.SEED == 7  # noqa: PLR2004
    assert settings.SEARCH.KAPPA_SAMPLES == 200  # noqa: PLR2004


def test_dynaconf_env_override(env):
    """GODAN_* environment variables override settings."""
    env.setenv("GODAN_TEST_KEY", "test_value")
    settings.reload()
    assert settings.TEST_KEY == "test_value"


def test_dynaconf_nested_override(env):
    env.setenv("GODAN_SEARCH__NODE_BUDGET", "5000")
    settings.reload()
    assert settings.SEARCH.NODE_BUDGET == 5000  # noqa: PLR2004
    # siblings survive the merge
    assert settings.SEARCH.MAX_VERTICES == 120  # noqa: PLR2004
