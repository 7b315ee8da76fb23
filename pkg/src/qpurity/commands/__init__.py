"""Implementations of the qpurity subcommands."""
import json
import pathlib
from typing import Any, Dict

from qpurity import __version__
from qpurity.config.types import RunConfig


def with_provenance(payload: Dict[str, Any], config: RunConfig) -> Dict[str, Any]:
    """Attach the effective configuration and the package version to a JSON payload."""
    return {**payload, "config": config.asdict(), "version": __version__}


def dump_json(payload: Dict[str, Any]) -> str:
    """Serialise with shortest round-trip floats."""
    return json.dumps(payload, indent=2)


def output_dir(config: RunConfig) -> pathlib.Path:
    """The configured output directory, created if needed."""
    path = pathlib.Path(config.out)
    path.mkdir(parents=True, exist_ok=True)
    return path
