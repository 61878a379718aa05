"""Wall-clock timing for walks and sweeps."""

import time


class PerformanceTimer:
    """Timer for walks; also reports step throughput."""

    def __init__(self):
        self.start_time: float = 0.0
        self.end_time: float = 0.0

    def __enter__(self) -> "PerformanceTimer":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.stop()

    def start(self) -> None:
        self.start_time = time.perf_counter()
        self.end_time = 0.0

    def stop(self) -> float:
        """Stop timing and return duration."""
        self.end_time = time.perf_counter()
        return self.duration

    @property
    def duration(self) -> float:
        end = self.end_time or time.perf_counter()
        return end - self.start_time

    def rate(self, steps: int) -> float:
        """Steps per second over the measured interval (0 before any time has passed)."""
        seconds = self.duration
        return steps / seconds if seconds > 0 else 0.0
