"""Configuration management for thomason-lab."""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_SNAPSHOT = Path(__file__).resolve().parent.parent / "data" / "wiring.json"


class LabConfig(BaseSettings):
    """Settings for walks, oracles, sweeps and reports."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Walk
    step_budget: int = Field(default=1_000_000_000, description="Maximum lollipops per walk")
    checkpoint_every: int = Field(default=1_000_000, description="Log walk progress every N steps")

    # Oracle budgets
    oracle_max_vertices: int = Field(default=30, description="Refuse cycle enumeration above this size")
    lollipop_node_budget: int = Field(default=10_000_000, description="Maximum nodes of a materialized lollipop graph")

    # Sweeps
    sweep_n_min: int = Field(default=3, description="Smallest n of a sweep")
    sweep_n_max: int = Field(default=36, description="Largest n of a sweep")
    fit_n_min: Optional[int] = Field(default=None, description="Lower end of the exponent fit window (default: top half)")
    max_workers: int = Field(default=1, description="Parallel sweep workers")

    # Wiring search
    search_max_n: int = Field(default=6, description="Largest n checked by the wiring search")
    snapshot_path: Path = Field(default=DEFAULT_SNAPSHOT, description="Canonical wiring snapshot")

    # Logging
    logs_path: Path = Field(default=Path("./logs"), description="Path to logs directory")
    log_level: str = Field(default="INFO", description="Console log level")

    def fit_window(self, n_min: int, n_max: int) -> tuple[int, int]:
        """Return the exponent fit window, the top half of the range unless configured."""
        if self.fit_n_min is not None:
            return max(self.fit_n_min, n_min), n_max
        return n_min + (n_max - n_min) // 2, n_max


def get_config(**kwargs) -> LabConfig:
    """Factory returning settings with explicit overrides applied on top of the environment."""
    overrides = {k: v for k, v in kwargs.items() if v is not None}
    return LabConfig(**overrides)
