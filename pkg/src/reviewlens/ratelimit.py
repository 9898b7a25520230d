"""Sliding-window rate limiter.

Three dimensions per policy: requests per minute, requests per day, and
tokens per minute. Windows slide continuously (membership is
``t > now - W``), the conservative reading of a per-minute limit, rather
than resetting on fixed bucket boundaries. A denial is a value, not an
exception: it carries the delay after which the blocking dimension frees
capacity. Acquisition is guarded by a lock so concurrent callers see a
linearizable grant order.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass

from .clocks import Clock, SYSTEM_CLOCK
from .registry import RateLimitPolicy

__all__ = ["PermitDecision", "SlidingWindowLimiter", "TOKEN_REQUEST_TOO_LARGE"]

MINUTE = 60.0
DAY = 86400.0

TOKEN_REQUEST_TOO_LARGE = "token_request_too_large"


@dataclass(frozen=True)
class PermitDecision:
    granted: bool
    retry_after: float = 0.0
    reason: str = ""

    def __bool__(self) -> bool:
        return self.granted


class SlidingWindowLimiter:
    def __init__(self, policy: RateLimitPolicy, clock: Clock = SYSTEM_CLOCK):
        self.policy = policy
        self.clock = clock
        self._minute: deque[tuple[float, int]] = deque()
        self._day: deque[float] = deque()
        self._minute_tokens = 0
        self._lock = threading.Lock()

    def _evict(self, now: float) -> None:
        while self._minute and self._minute[0][0] <= now - MINUTE:
            _, tokens = self._minute.popleft()
            self._minute_tokens -= tokens
        while self._day and self._day[0] <= now - DAY:
            self._day.popleft()

    def acquire_permit(self, tokens_needed: int = 0) -> PermitDecision:
        """Grant if every dimension admits; otherwise report the earliest
        time any blocking dimension frees capacity.

        A single request larger than the whole token-per-minute window can
        never be satisfied and is flagged ``token_request_too_large``.
        """
        policy = self.policy
        with self._lock:
            now = self.clock.now()
            self._evict(now)

            if policy.tokens_per_minute is not None and tokens_needed > policy.tokens_per_minute:
                return PermitDecision(False, retry_after=math.inf, reason=TOKEN_REQUEST_TOO_LARGE)

            blockers: list[tuple[float, str]] = []
            if policy.requests_per_minute is not None and len(self._minute) >= policy.requests_per_minute:
                blockers.append((self._minute[0][0] + MINUTE, "rpm"))
            if policy.requests_per_day is not None and len(self._day) >= policy.requests_per_day:
                blockers.append((self._day[0] + DAY, "rpd"))
            if (
                policy.tokens_per_minute is not None
                and self._minute_tokens + tokens_needed > policy.tokens_per_minute
            ):
                # Walk the oldest entries until enough tokens would expire.
                excess = self._minute_tokens + tokens_needed - policy.tokens_per_minute
                freed = 0
                free_at = now
                for stamp, tokens in self._minute:
                    freed += tokens
                    free_at = stamp + MINUTE
                    if freed >= excess:
                        break
                blockers.append((free_at, "tpm"))

            if blockers:
                free_at, reason = min(blockers)
                return PermitDecision(False, retry_after=max(0.0, free_at - now), reason=reason)

            self._minute.append((now, tokens_needed))
            self._minute_tokens += tokens_needed
            self._day.append(now)
            return PermitDecision(True)
