"""Injectable clocks.

Anything that measures time, sleeps, or stamps records takes a clock so
tests (and the offline bench) can run on simulated time and stay
bit-reproducible. ``now()`` is a monotonic seconds counter used for
durations and rate-limit windows; ``utcnow()`` is the wall-clock used for
timestamps written to disk.
"""

from __future__ import annotations

import time
from datetime import date, datetime, timedelta, timezone
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float: ...

    def utcnow(self) -> datetime: ...

    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def utcnow(self) -> datetime:
        return datetime.now(timezone.utc)

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)

    def today(self) -> date:
        return self.utcnow().date()


class SimulatedClock:
    """Manually advanced clock; ``sleep`` advances time instead of blocking."""

    def __init__(self, start: float = 0.0, base: datetime | None = None):
        self._now = start
        self._base = base or datetime(2025, 1, 1, tzinfo=timezone.utc)

    def now(self) -> float:
        return self._now

    def utcnow(self) -> datetime:
        return self._base + timedelta(seconds=self._now)

    def sleep(self, seconds: float) -> None:
        self.advance(seconds)

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("cannot move a clock backwards")
        self._now += seconds

    def today(self) -> date:
        return self.utcnow().date()


SYSTEM_CLOCK = SystemClock()
