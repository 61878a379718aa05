"""Core modules for thomason-lab."""

from .config import LabConfig, get_config
from .errors import LabError
from .graph import CubicGraph, HamCycle, OrientedHamPath

__all__ = ["LabConfig", "get_config", "LabError", "CubicGraph", "HamCycle", "OrientedHamPath"]
