"""Utility modules for thomason-lab."""

from .logger import setup_logger
from .timing import PerformanceTimer

__all__ = ["setup_logger", "PerformanceTimer"]
