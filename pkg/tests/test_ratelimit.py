from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import window_scan_violations
from reviewlens.clocks import SimulatedClock
from reviewlens.ratelimit import TOKEN_REQUEST_TOO_LARGE, SlidingWindowLimiter
from reviewlens.registry import RateLimitPolicy

GEMINI_POLICY = RateLimitPolicy(requests_per_minute=15, requests_per_day=1500, tokens_per_minute=1_000_000)


def test_sixteenth_request_in_same_minute_waits_a_minute():
    clock = SimulatedClock()
    limiter = SlidingWindowLimiter(GEMINI_POLICY, clock)
    for _ in range(15):
        assert limiter.acquire_permit(100).granted
    decision = limiter.acquire_permit(100)
    assert not decision.granted
    assert decision.reason == "rpm"
    assert decision.retry_after == pytest.approx(60.0)
    clock.advance(decision.retry_after + 1e-9)
    assert limiter.acquire_permit(100).granted


def test_token_request_larger_than_window_is_never_satisfiable():
    clock = SimulatedClock()
    limiter = SlidingWindowLimiter(GEMINI_POLICY, clock)
    decision = limiter.acquire_permit(1_000_001)
    assert not decision.granted
    assert decision.reason == TOKEN_REQUEST_TOO_LARGE
    assert math.isinf(decision.retry_after)


def test_daily_cap_blocks_until_day_window_slides():
    clock = SimulatedClock()
    limiter = SlidingWindowLimiter(GEMINI_POLICY, clock)
    # 1500 grants spread over the day, under the per-minute limits.
    for _ in range(1500):
        assert limiter.acquire_permit(10).granted
        clock.advance(86400 / 1500)
    # Elapsed exactly one day: the oldest grant is just sliding out, so the
    # 1501st request is briefly denied and then admitted.
    clock2 = SimulatedClock()
    limiter2 = SlidingWindowLimiter(GEMINI_POLICY, clock2)
    step = 50.0
    for _ in range(1500):
        assert limiter2.acquire_permit(10).granted
        clock2.advance(step)
    decision = limiter2.acquire_permit(10)
    assert not decision.granted
    assert decision.reason == "rpd"
    clock2.advance(decision.retry_after + 1e-6)
    assert limiter2.acquire_permit(10).granted


def test_token_window_blocks_and_frees():
    clock = SimulatedClock()
    limiter = SlidingWindowLimiter(GEMINI_POLICY, clock)
    assert limiter.acquire_permit(600_000).granted
    clock.advance(10)
    assert limiter.acquire_permit(399_999).granted
    decision = limiter.acquire_permit(10)
    assert not decision.granted
    assert decision.reason == "tpm"
    # The first grant frees its tokens 60s after it was made.
    assert decision.retry_after == pytest.approx(50.0)
    clock.advance(decision.retry_after + 1e-9)
    assert limiter.acquire_permit(10).granted


def drive_random_schedule(seed: int, n_requests: int, honor_retry: bool = True):
    """Push a randomized schedule through the limiter; returns the grant log."""
    rng = random.Random(seed)
    clock = SimulatedClock()
    limiter = SlidingWindowLimiter(GEMINI_POLICY, clock)
    grants: list[tuple[float, int]] = []
    for _ in range(n_requests):
        tokens = rng.choice([1, 10, 1000, 50_000, 200_000, 900_000])
        decision = limiter.acquire_permit(tokens)
        if decision.granted:
            grants.append((clock.now(), tokens))
        elif honor_retry and rng.random() < 0.5 and not math.isinf(decision.retry_after):
            clock.advance(decision.retry_after)
            retry = limiter.acquire_permit(tokens)
            if retry.granted:
                grants.append((clock.now(), tokens))
        # Mixture of bursts (no advance) and spread-out arrivals.
        clock.advance(rng.choice([0.0, 0.0, 0.01, 0.5, 2.0, 30.0, 400.0]))
    return grants


@pytest.mark.parametrize("seed", range(5))
def test_randomized_schedules_never_violate_windows(seed):
    grants = drive_random_schedule(seed, n_requests=2000)
    assert grants, "schedule should produce at least some grants"
    violations = window_scan_violations(grants, rpm=15, rpd=1500, tpm=1_000_000)
    assert violations == []


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=10**6),
    n=st.integers(min_value=50, max_value=400),
)
def test_schedule_safety_property(seed, n):
    grants = drive_random_schedule(seed, n_requests=n)
    assert window_scan_violations(grants, rpm=15, rpd=1500, tpm=1_000_000) == []
