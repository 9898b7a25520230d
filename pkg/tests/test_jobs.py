from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURE_URL
from reviewlens.clocks import SimulatedClock
from reviewlens.errors import InvalidTransition
from reviewlens.jobs import STATES, JobStore
from reviewlens.models import validate_listing_url


@pytest.fixture
def store(tmp_path):
    return JobStore(tmp_path / "jobs", clock=SimulatedClock())


@pytest.fixture
def listing():
    return validate_listing_url(FIXTURE_URL)


def test_create_then_happy_path(store, listing):
    record, created = store.create_or_get(listing)
    assert created
    assert record.state == "pending"
    record = store.transition(record.job_id, "fetching")
    record = store.transition(record.job_id, "ready", review_count=200)
    assert record.review_count == 200


def test_in_flight_job_is_reused(store, listing):
    first, created_first = store.create_or_get(listing)
    second, created_second = store.create_or_get(listing)
    assert created_first and not created_second
    assert first.job_id == second.job_id


def test_terminal_job_is_replaced(store, listing):
    record, _ = store.create_or_get(listing)
    store.transition(record.job_id, "fetching")
    store.transition(record.job_id, "failed", error="no_reviews_found")
    fresh, created = store.create_or_get(listing)
    assert created
    assert fresh.state == "pending"
    assert fresh.error is None


def test_invalid_transitions_rejected(store, listing):
    record, _ = store.create_or_get(listing)
    with pytest.raises(InvalidTransition):
        store.transition(record.job_id, "ready")  # skipping "fetching"
    store.transition(record.job_id, "fetching")
    store.transition(record.job_id, "ready")
    for bad in ("pending", "fetching", "failed"):
        with pytest.raises(InvalidTransition):
            store.transition(record.job_id, bad)


def test_unknown_job_rejected(store):
    with pytest.raises(InvalidTransition):
        store.transition("job-void", "fetching")


def test_corrupt_job_file_is_dropped_on_load(tmp_path, listing):
    clock = SimulatedClock()
    store = JobStore(tmp_path / "jobs", clock=clock)
    record, _ = store.create_or_get(listing)
    (tmp_path / "jobs" / "job-torn.json").write_text("{not json")
    reloaded = JobStore(tmp_path / "jobs", clock=clock)
    assert reloaded.get(record.job_id) is not None
    assert reloaded.get("job-torn") is None
    assert not (tmp_path / "jobs" / "job-torn.json").exists()


def test_records_survive_restart(tmp_path, listing):
    clock = SimulatedClock()
    store = JobStore(tmp_path / "jobs", clock=clock)
    record, _ = store.create_or_get(listing)
    store.transition(record.job_id, "fetching")
    store.transition(record.job_id, "ready", review_count=5)
    reloaded = JobStore(tmp_path / "jobs", clock=clock)
    assert reloaded.get(record.job_id).state == "ready"
    assert reloaded.get(record.job_id).review_count == 5


@given(attempts=st.lists(st.sampled_from(STATES), max_size=25))
def test_state_index_never_regresses(tmp_path_factory, attempts):
    store = JobStore(tmp_path_factory.mktemp("jobs"), clock=SimulatedClock())
    listing = validate_listing_url(FIXTURE_URL)
    record, _ = store.create_or_get(listing)
    order = {name: i for i, name in enumerate(STATES)}
    history = [record.state]
    for target in attempts:
        try:
            record = store.transition(record.job_id, target)
        except InvalidTransition:
            pass
        history.append(store.get(record.job_id).state)
    indexes = [order[s] for s in history]
    assert indexes == sorted(indexes)
