"""thomason-lab: exponential runs of Thomason's lollipop algorithm on planar cubic graphs."""

from .core.config import LabConfig
from .core.family import FamilyInstance, build
from .core.lollipop import run_thomason

__version__ = "1.0.0"
__all__ = ["LabConfig", "FamilyInstance", "build", "run_thomason"]
