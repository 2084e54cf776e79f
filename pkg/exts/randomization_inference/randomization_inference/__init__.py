"""Randomization tests, studentized permutation statistics, conformal prediction and cluster ART."""

import os
import toml
from importlib import metadata

RANDINF_EXT_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "../"))

RANDINF_CONFIG_FILE = os.path.join(RANDINF_EXT_DIR, "config", "extension.toml")


def _read_version() -> str:
    # source checkouts carry the extension.toml next to the package
    if os.path.isfile(RANDINF_CONFIG_FILE):
        return toml.load(RANDINF_CONFIG_FILE)["package"]["version"]
    try:
        return metadata.version("randomization_inference")
    except metadata.PackageNotFoundError:
        return "0.0.0"


__version__ = _read_version()

from .errors import *  # noqa: F401, F403
from .sample import Sample  # noqa: E402
