"""Logging utilities for thomason-lab."""

import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

from loguru import logger


def setup_logger(config, run_id: str = "main"):
    """Set up console and rotating file logging for a run."""
    # Remove default handler
    logger.remove()

    logs_dir = Path(config.logs_path)
    logs_dir.mkdir(parents=True, exist_ok=True)

    # Console handler
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        level=config.log_level.upper(),
    )

    # Main log file
    logger.add(
        logs_dir / f"thomason_{run_id}.log",
        rotation="1 day",
        retention="7 days",
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
        level="DEBUG",
    )

    # Error log file
    logger.add(
        logs_dir / f"thomason_errors_{run_id}.log",
        rotation="1 day",
        retention="30 days",
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
        level="ERROR",
    )


def log_walk_start(label: str, n_vertices: int, budget: int):
    """Log the start of a walk."""
    logger.info(f"[{label}] Starting walk on {n_vertices} vertices (budget {budget:,} steps)")


def log_walk_checkpoint(label: str, steps: int, rightmost: int):
    """Log walk progress."""
    logger.info(f"[{label}] {steps:,} steps, {rightmost:,} rightmost paths so far")


def log_walk_completion(
    label: str, steps: int, rightmost: int, duration: float, max_gap: Optional[int] = None, rate: Optional[float] = None
):
    """Log walk completion."""
    gap = f", max gap {max_gap}" if max_gap is not None else ""
    speed = f" ({rate:,.0f} steps/s)" if rate else ""
    logger.info(f"[{label}] Walk finished after {steps:,} steps in {duration:.2f}s{speed} - {rightmost:,} rightmost{gap}")


def log_lemma_result(lemma: str, n: int, passed: bool, detail: str = ""):
    """Log the outcome of a lemma check."""
    status = "PASS" if passed else "FAIL"
    message = f"Lemma {lemma} n={n}: {status}" + (f" - {detail}" if detail else "")
    if passed:
        logger.info(message)
    else:
        logger.error(message)


def log_sweep_row(n: int, steps: int, rightmost: int, max_gap: int):
    """Log one sweep row."""
    logger.info(f"Sweep n={n}: T={steps:,} rightmost={rightmost:,} max_gap={max_gap}")


def start_run(command: str) -> str:
    """Start a run and return run ID."""
    run_id = f"run_{datetime.now().strftime('%Y%m%d_%H%M%S')}"
    logger.debug(f"Starting run {run_id} - {command}")
    return run_id
