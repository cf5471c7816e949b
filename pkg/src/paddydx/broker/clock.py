"""Injectable time source so lease-expiry behavior is testable."""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float: ...


class SystemClock:
    """Wall-clock seconds (epoch)."""

    def now(self) -> float:
        return time.time()


class MonotonicClock:
    def now(self) -> float:
        return time.monotonic()


class ManualClock:
    """Deterministic clock advanced explicitly by tests."""

    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("cannot move time backwards")
        self._now += seconds
