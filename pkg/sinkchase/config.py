"""Process-level defaults read from environment variables."""
from os import getenv
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .debug import debug_print, is_debug_enabled
from .errors import ConfigError

DEFAULT_MAX_STEPS = 10_000
DEFAULT_BASE_SEED = 0
DEFAULT_OUT_DIR = "results"
DEFAULT_JOBS = 1


class Settings(BaseModel):
    """Defaults for the command line and the experiment harness."""

    model_config = ConfigDict(frozen=True)

    max_steps: int = Field(DEFAULT_MAX_STEPS, ge=1)
    base_seed: int = DEFAULT_BASE_SEED
    out_dir: Path = Path(DEFAULT_OUT_DIR)
    jobs: int = Field(DEFAULT_JOBS, ge=1)


def _int_from_env(name: str, default: int) -> int:
    raw = getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def load_settings(env_prefix: Optional[str] = None) -> Settings:
    """Load settings from ``SINKCHASE_*`` environment variables.

    Args:
        env_prefix: Optional tenant prefix, e.g. ``LAB`` reads ``LAB_SINKCHASE_MAX_STEPS``

    Returns:
        Settings: validated settings, falling back to the built-in defaults

    Raises:
        ConfigError: if a variable is set to a malformed or out-of-range value
    """
    prefix = f"{env_prefix.upper()}_" if env_prefix else ""
    values = {
        "max_steps": _int_from_env(f"{prefix}SINKCHASE_MAX_STEPS", DEFAULT_MAX_STEPS),
        "base_seed": _int_from_env(f"{prefix}SINKCHASE_BASE_SEED", DEFAULT_BASE_SEED),
        "out_dir": Path(getenv(f"{prefix}SINKCHASE_OUT_DIR", DEFAULT_OUT_DIR)),
        "jobs": _int_from_env(f"{prefix}SINKCHASE_JOBS", DEFAULT_JOBS),
    }
    if values["max_steps"] < 1:
        raise ConfigError(f"{prefix}SINKCHASE_MAX_STEPS must be at least 1")
    if values["jobs"] < 1:
        raise ConfigError(f"{prefix}SINKCHASE_JOBS must be at least 1")
    settings = Settings(**values)
    if is_debug_enabled('cli'):
        debug_print('cli', f"Settings ({prefix or 'no prefix'}): {settings!r}")
    return settings
