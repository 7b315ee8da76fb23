"""
Configuration of qpurity.

A configuration file is one JSON document whose keys are the fields of
:class:`~qpurity.config.types.RunConfig`.
"""
import json
import logging
import pathlib

from qpurity.config.types import RunConfig
from qpurity.defaults import DEFAULT_CONFIG_PATH
from qpurity.errors import ConfigError

logger = logging.getLogger(__name__)


""" The default configuration for qpurity (if no config file exists) """
DEFAULT_CONFIG = RunConfig()


def load(config_path: str = DEFAULT_CONFIG_PATH) -> RunConfig:
    """
    Load config file and set values to defaults where not present.

    :param config_path: The path where to search for the config file.
    :return: The configuration ``RunConfig``
    """
    path = pathlib.Path(config_path)
    if not path.exists():
        logger.debug("Could not locate %s, using default config.", config_path)
        return DEFAULT_CONFIG

    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ConfigError(f"{config_path} is not valid JSON: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"{config_path} must hold a JSON object.")
    return RunConfig.from_mapping(data)
