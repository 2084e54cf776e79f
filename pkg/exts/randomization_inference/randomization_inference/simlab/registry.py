"""Registry of calibration studies.

Studies are registered like environments: an identifier, an entry point ``"module:function"`` resolved on first
use, and the configuration class the entry point consumes.
"""

from __future__ import annotations

import dataclasses
import importlib
import pandas as pd
from collections.abc import Callable
from dataclasses import dataclass

from ..errors import ParameterError
from .studies_cfg import ScenarioCfg


@dataclass(frozen=True)
class StudySpec:
    """A registered study."""

    id: str
    entry_point: str
    """Study function as ``"module:function"``."""
    cfg_entry_point: type[ScenarioCfg]
    """Configuration class of the study."""
    description: str = ""

    def load(self) -> Callable[[ScenarioCfg], pd.DataFrame]:
        module_name, attribute = self.entry_point.split(":")
        return getattr(importlib.import_module(module_name), attribute)


registry: dict[str, StudySpec] = {}


def register(id: str, entry_point: str, cfg_entry_point: type[ScenarioCfg], description: str = ""):
    """Register a study.

    Raises:
        ParameterError: When the identifier is already taken.
    """
    if id in registry:
        raise ParameterError(f"A study with id '{id}' is already registered.")
    registry[id] = StudySpec(id=id, entry_point=entry_point, cfg_entry_point=cfg_entry_point, description=description)


def spec(id: str) -> StudySpec:
    if id not in registry:
        raise ParameterError(f"Unknown study '{id}'. Available studies: {sorted(registry)}.")
    return registry[id]


def make_cfg(id: str, **overrides) -> ScenarioCfg:
    """Default configuration of a study with field overrides (None values are ignored)."""
    cfg = spec(id).cfg_entry_point()
    overrides = {key: value for key, value in overrides.items() if value is not None}
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def run_study(id: str, cfg: ScenarioCfg | None = None, **overrides) -> pd.DataFrame:
    """Run a registered study with its default configuration, ``cfg`` or the default with overrides."""
    cfg = make_cfg(id, **overrides) if cfg is None else cfg
    return spec(id).load()(cfg)
