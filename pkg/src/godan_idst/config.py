"""
Configuration management for godan-idst.

This module initializes the `dynaconf` settings object, which loads configuration
from `settings.toml`, `.secrets.toml`, and environment variables prefixed with
``GODAN_``. It serves as the central point for accessing application settings.
"""

from pathlib import Path

from dynaconf import Dynaconf, Validator

# Resolve the project root directory
# src/godan_idst/config.py -> src/godan_idst -> src -> root
BASE_DIR = Path(__file__).resolve().parent.parent.parent
SETTINGS_FILE = BASE_DIR / "settings.toml"
SECRETS_FILE = BASE_DIR / ".secrets.toml"

# Global settings object initialized with Dynaconf
settings = Dynaconf(
    envvar_prefix="GODAN",
    settings_files=[str(SETTINGS_FILE), str(SECRETS_FILE)],
    environments=True,
    env_switcher="GODAN_MODE",
    load_dotenv=True,
    merge_enabled=True,
    validators=[
        Validator("LOG_LEVEL", default="INFO", is_type_of=str),
        Validator("LOG_FORMAT", default="console", is_in=["console", "json", "structured"]),
        Validator("USE_OPENTELEMETRY", default=False, is_type_of=bool),
        Validator("OUTPUT_DIR", default=".", is_type_of=str),
        Validator("BUILDER.FALLBACK_SEARCH", default=False, is_type_of=bool),
        Validator("BUILDER.POSITION", default=0, is_type_of=int, gte=0),
        Validator("BUILDER.MAX_N", default=7, is_type_of=int, gte=3),
        Validator("SEARCH.NODE_BUDGET", default=2_000_000, is_type_of=int, gt=0),
        Validator("SEARCH.MAX_VERTICES", default=120, is_type_of=int, gt=0),
        Validator("SEARCH.EXHAUSTIVE_MAX_VERTICES", default=24, is_type_of=int, gt=0),
        Validator("SEARCH.KAPPA_SAMPLES", default=200, is_type_of=int, gt=0),
        Validator("SWEEP.SEED", default=7, is_type_of=int),
        Validator("SWEEP.JOBS", default=0, is_type_of=int, gte=0),
        Validator("SUITE.PAIR_SAMPLES", default=500, is_type_of=int, gt=0),
        Validator("SUITE.DELETION_SAMPLES", default=100, is_type_of=int, gt=0),
        Validator("SUITE.TRIANGLE_SAMPLES", default=2000, is_type_of=int, gt=0),
        Validator("SUITE.CLUSTER_UNION_SAMPLES", default=20, is_type_of=int, gt=0),
        Validator("CLI.FALLBACK_SEARCH", default=True, is_type_of=bool),
    ],
)

# Trigger validation
settings.validators.validate()
