from __future__ import annotations

import time

import pytest
from fastapi.testclient import TestClient

from conftest import EMPTY_URL, FIXTURE_URL
from reviewlens.clocks import SimulatedClock
from reviewlens.config import ServiceConfig
from reviewlens.service import build_state, create_app


def make_client(tmp_path, clock=None, **config_overrides):
    clock = clock or SimulatedClock()
    config = ServiceConfig(cache_dir=tmp_path / "cache", default_model_id="mock", **config_overrides)
    state = build_state(config, clock=clock)
    app = create_app(state=state, clock=clock)
    return TestClient(app), state


def wait_ready(client, job_id, timeout_s=10.0):
    deadline = time.monotonic() + timeout_s
    while time.monotonic() < deadline:
        record = client.get(f"/api/jobs/{job_id}").json()
        if record["state"] in ("ready", "failed"):
            return record
        time.sleep(0.01)
    raise AssertionError(f"job {job_id} still pending after {timeout_s}s")


def submit_and_wait(client, url=FIXTURE_URL):
    response = client.post("/api/listings", json={"url": url})
    assert response.status_code in (200, 202)
    record = wait_ready(client, response.json()["job_id"])
    return record


class TestSubmitListing:
    def test_submit_returns_job_and_completes(self, tmp_path):
        client, _ = make_client(tmp_path)
        response = client.post("/api/listings", json={"url": FIXTURE_URL})
        assert response.status_code == 202
        record = wait_ready(client, response.json()["job_id"])
        assert record["state"] == "ready"
        assert record["review_count"] == 200

    def test_second_post_is_idempotent(self, tmp_path):
        client, _ = make_client(tmp_path)
        first = submit_and_wait(client)
        second = client.post("/api/listings", json={"url": FIXTURE_URL})
        assert second.status_code == 200
        assert second.json()["job_id"] == first["job_id"]

    def test_malformed_url(self, tmp_path):
        client, _ = make_client(tmp_path)
        response = client.post("/api/listings", json={"url": "not a url"})
        assert response.status_code == 400
        assert response.json()["error"] == "malformed_url"

    def test_unsupported_host(self, tmp_path):
        client, _ = make_client(tmp_path)
        response = client.post("/api/listings", json={"url": "https://example.com/x"})
        assert response.status_code == 400
        assert response.json()["error"] == "unsupported_host"

    def test_disabled_provider_rejected_up_front(self, tmp_path):
        client, _ = make_client(tmp_path)
        response = client.post("/api/listings", json={"url": FIXTURE_URL, "provider": "live-scrape"})
        assert response.status_code == 503
        assert response.json()["error"] == "provider_disabled"

    def test_failed_fetch_surfaces_on_job(self, tmp_path):
        client, _ = make_client(tmp_path)
        response = client.post("/api/listings", json={"url": EMPTY_URL})
        record = wait_ready(client, response.json()["job_id"])
        assert record["state"] == "failed"
        assert record["error"] == "no_reviews_found"

    def test_unknown_job(self, tmp_path):
        client, _ = make_client(tmp_path)
        assert client.get("/api/jobs/job-void").status_code == 404


class TestSummaryEndpoint:
    def test_summary_for_ready_listing(self, tmp_path):
        client, _ = make_client(tmp_path)
        record = submit_and_wait(client)
        response = client.get(f"/api/listings/{record['listing_id']}/summary")
        assert response.status_code == 200
        body = response.json()
        assert body["kind"] == "summary"
        assert body["text"].startswith("mock-completion")
        assert body["language"] == "en"

    def test_language_passthrough(self, tmp_path):
        client, _ = make_client(tmp_path)
        record = submit_and_wait(client)
        body = client.get(f"/api/listings/{record['listing_id']}/summary?lang=el").json()
        assert body["language"] == "el"
        assert "language=el" in body["text"]

    def test_unknown_listing_404(self, tmp_path):
        client, _ = make_client(tmp_path)
        assert client.get("/api/listings/ffffffffffffffff/summary").status_code == 404

    def test_not_ready_listing_409(self, tmp_path):
        client, _ = make_client(tmp_path)
        response = client.post("/api/listings", json={"url": EMPTY_URL})
        record = wait_ready(client, response.json()["job_id"])
        assert record["state"] == "failed"
        assert client.get(f"/api/listings/{record['listing_id']}/summary").status_code == 409

    def test_cached_summary_skips_gateway(self, tmp_path):
        client, state = make_client(tmp_path)
        record = submit_and_wait(client)
        client.get(f"/api/listings/{record['listing_id']}/summary")
        dispatched = state.engine.gateway.completions_dispatched
        assert dispatched == 1
        client.get(f"/api/listings/{record['listing_id']}/summary")
        assert state.engine.gateway.completions_dispatched == dispatched

    def test_bad_language_rejected(self, tmp_path):
        client, _ = make_client(tmp_path)
        record = submit_and_wait(client)
        response = client.get(f"/api/listings/{record['listing_id']}/summary?lang=not-a-code!")
        assert response.status_code == 400

    def test_expired_corpus_means_not_ready_until_resubmitted(self, tmp_path):
        clock = SimulatedClock()
        client, state = make_client(tmp_path, clock=clock, cache_ttl_s=3600)
        record = submit_and_wait(client)
        listing_id = record["listing_id"]
        assert client.get(f"/api/listings/{listing_id}/summary").status_code == 200
        clock.advance(3601)
        response = client.get(f"/api/listings/{listing_id}/summary")
        assert response.status_code == 409
        # Re-submitting replaces the stale job and refreshes the corpus.
        resubmit = client.post("/api/listings", json={"url": FIXTURE_URL})
        assert resubmit.status_code == 202
        wait_ready(client, resubmit.json()["job_id"])
        assert client.get(f"/api/listings/{listing_id}/summary").status_code == 200


class TestQueryEndpoint:
    def test_question_with_evidence(self, tmp_path):
        client, _ = make_client(tmp_path)
        record = submit_and_wait(client)
        response = client.post(
            f"/api/listings/{record['listing_id']}/query", json={"question": "is parking free"}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["kind"] == "answer"
        assert body["insufficient_evidence"] is False

    def test_nonsense_question_flags_insufficient_evidence(self, tmp_path):
        client, _ = make_client(tmp_path)
        record = submit_and_wait(client)
        body = client.post(
            f"/api/listings/{record['listing_id']}/query",
            json={"question": "zeppelin helipad teleporter"},
        ).json()
        assert body["insufficient_evidence"] is True

    def test_empty_question_400(self, tmp_path):
        client, _ = make_client(tmp_path)
        record = submit_and_wait(client)
        response = client.post(f"/api/listings/{record['listing_id']}/query", json={"question": "  "})
        assert response.status_code == 400
        assert response.json()["error"] == "empty_question"

    def test_queries_not_cached(self, tmp_path):
        client, state = make_client(tmp_path)
        record = submit_and_wait(client)
        before = state.engine.gateway.completions_dispatched
        for _ in range(2):
            client.post(f"/api/listings/{record['listing_id']}/query", json={"question": "parking"})
        assert state.engine.gateway.completions_dispatched == before + 2


class TestModelsEndpoint:
    def test_eight_seed_rows(self, tmp_path):
        client, _ = make_client(tmp_path)
        body = client.get("/api/models").json()
        assert len(body["models"]) == 8

    def test_gpt4_window_fields(self, tmp_path):
        client, _ = make_client(tmp_path)
        models = {m["model_id"]: m for m in client.get("/api/models").json()["models"]}
        assert models["gpt-4"]["prompt_window"] == 8192
        assert models["gpt-4"]["input_cost_per_1m"] == "30.000000"
        assert models["llama-3.2-3b"]["available"] is False

    def test_registering_ninth_model_grows_listing(self, tmp_path):
        client, state = make_client(tmp_path)
        from decimal import Decimal

        from reviewlens.registry import ModelProfile

        state.engine.gateway.registry.register_model(
            ModelProfile(
                model_id="house-model",
                display_name="House",
                release_date="2025-01",
                input_cost_per_1m=Decimal(0),
                output_cost_per_1m=Decimal(0),
                prompt_window=1000,
                completion_window=1000,
            )
        )
        assert len(client.get("/api/models").json()["models"]) == 9


class TestAuditAndRequestIds:
    def test_every_response_has_request_id(self, tmp_path):
        client, _ = make_client(tmp_path)
        first = client.get("/api/models")
        second = client.get("/api/models")
        assert first.headers["X-Request-Id"] == "1"
        assert second.headers["X-Request-Id"] == "2"

    def test_audit_line_count_matches_completed_requests(self, tmp_path):
        client, state = make_client(tmp_path)
        client.get("/api/models")
        client.post("/api/listings", json={"url": "not a url"})
        client.get("/api/jobs/job-void")
        assert state.request_audit.count == 3
        log_path = tmp_path / "cache" / "requests.jsonl"
        assert len(log_path.read_text().strip().splitlines()) == 3


def run_session(tmp_path):
    """One full client session; returns the bytes of every insight response."""
    client, _ = make_client(tmp_path)
    record = submit_and_wait(client)
    listing_id = record["listing_id"]
    bodies = [client.get(f"/api/listings/{listing_id}/summary?model=mock").content]
    for question in ("is parking free", "how is the wifi", "zeppelin teleporter"):
        bodies.append(
            client.post(
                f"/api/listings/{listing_id}/query", json={"question": question, "model": "mock"}
            ).content
        )
    return bodies


def test_sessions_are_byte_identical_across_runs(tmp_path):
    runs = [run_session(tmp_path / f"run{i}") for i in range(3)]
    for other in runs[1:]:
        assert other == runs[0]
