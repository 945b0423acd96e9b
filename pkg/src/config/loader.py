"""Loading of settings and model files.

Model files are JSON-compatible; both JSON and YAML are read through
``yaml.safe_load`` since YAML is a superset of JSON.
"""
from __future__ import annotations
from functools import lru_cache
from pathlib import Path
from typing import Optional
import logging

import yaml
from pydantic import ValidationError

from errors import ModelError
from .schema import ModelFile, Settings

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / "defaults.yaml"

_active: Optional[Settings] = None


def load_settings(path: Optional[Path] = None) -> Settings:
    """Load settings from YAML.

    Args:
        path: Optional settings file. Defaults to defaults.yaml next to
              this module.

    Returns:
        Validated Settings; schema defaults when the file is missing.
    """
    if path is None:
        return _active if _active is not None else _packaged_settings()
    return _read_settings(Path(path))


def activate_settings(settings: Optional[Settings]) -> None:
    """Make ``settings`` what load_settings() returns; None restores the defaults."""
    global _active
    _active = settings


@lru_cache(maxsize=1)
def _packaged_settings() -> Settings:
    return _read_settings(DEFAULTS_PATH)


def _read_settings(path: Path) -> Settings:
    if not path.exists():
        logger.warning(f"Settings file not found: {path}, using schema defaults")
        return Settings()
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    try:
        settings = Settings(**data)
    except ValidationError as e:
        raise ModelError(f"invalid settings in {path}: {e}") from e
    logger.debug(f"Loaded settings from {path}")
    return settings


def load_model_file(path: Path) -> ModelFile:
    """Read and validate a model file.

    Raises:
        ModelError: file missing, unparsable, or failing the schema.
    """
    path = Path(path)
    if not path.exists():
        raise ModelError(f"model file not found: {path}")
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ModelError(f"cannot parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ModelError(f"{path} must contain a mapping at top level")
    try:
        model_file = ModelFile(**data)
    except ValidationError as e:
        raise ModelError(f"invalid model file {path}: {e}") from e
    logger.info(f"Loaded model file {path}")
    return model_file
