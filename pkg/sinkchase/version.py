"""Installed version of sinkchase, with a fallback for source checkouts."""
import sys
from functools import lru_cache
from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as pkg_version
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

PYPROJECT = Path(__file__).resolve().parent.parent / "pyproject.toml"


def _source_version() -> str:
    if not PYPROJECT.exists():
        return "unknown"
    with open(PYPROJECT, "rb") as f:
        project = tomllib.load(f).get("project", {})
    if project.get("name") != "sinkchase":
        return "unknown"
    return project.get("version", "unknown")


@lru_cache(maxsize=None)
def get_version() -> str:
    try:
        return pkg_version("sinkchase")
    except PackageNotFoundError:
        return _source_version()
