"""Fetch jobs and their flat-file store.

A job tracks one listing's asynchronous review fetch through the forward
state machine pending -> fetching -> (ready | failed). Transitions never
move backwards; once a record is terminal, a re-submission replaces it
with a fresh record rather than rewinding it. Records persist as one JSON
file per job so a restarted service picks up where it stopped.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .clocks import Clock, SYSTEM_CLOCK
from .errors import InvalidTransition
from .models import Listing

__all__ = ["JobRecord", "JobStore", "STATES"]

STATES = ("pending", "fetching", "ready", "failed")
_TERMINAL = {"ready", "failed"}
_ALLOWED = {("pending", "fetching"), ("fetching", "ready"), ("fetching", "failed")}


@dataclass(frozen=True)
class JobRecord:
    job_id: str
    listing_id: str
    url: str
    state: str
    created_at: str
    error: str | None = None
    review_count: int | None = None

    def as_dict(self) -> dict:
        return asdict(self)


class JobStore:
    def __init__(self, directory: Path | str, clock: Clock = SYSTEM_CLOCK):
        self.directory = Path(directory)
        self.clock = clock
        self._records: dict[str, JobRecord] = {}
        self._lock = threading.Lock()
        self._load()

    def _load(self) -> None:
        if not self.directory.exists():
            return
        for path in sorted(self.directory.glob("*.json")):
            try:
                record = JobRecord(**json.loads(path.read_text(encoding="utf-8")))
            except (json.JSONDecodeError, TypeError):
                # A torn write must not brick the store; drop the record.
                path.unlink(missing_ok=True)
                continue
            self._records[record.job_id] = record

    def _persist(self, record: JobRecord) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / f"{record.job_id}.json"
        path.write_text(json.dumps(record.as_dict(), sort_keys=True), encoding="utf-8")

    @staticmethod
    def job_id_for(listing_id: str) -> str:
        return f"job-{listing_id}"

    def get(self, job_id: str) -> JobRecord | None:
        with self._lock:
            return self._records.get(job_id)

    def get_by_listing(self, listing_id: str) -> JobRecord | None:
        return self.get(self.job_id_for(listing_id))

    def create_or_get(self, listing: Listing) -> tuple[JobRecord, bool]:
        """Return the in-flight record for this listing, or a fresh pending
        one (replacing any terminal record). Second value: created now."""
        with self._lock:
            job_id = self.job_id_for(listing.listing_id)
            existing = self._records.get(job_id)
            if existing is not None and existing.state not in _TERMINAL:
                return existing, False
            record = JobRecord(
                job_id=job_id,
                listing_id=listing.listing_id,
                url=listing.url,
                state="pending",
                created_at=self.clock.utcnow().isoformat(),
            )
            self._records[job_id] = record
            self._persist(record)
            return record, True

    def transition(
        self,
        job_id: str,
        new_state: str,
        error: str | None = None,
        review_count: int | None = None,
    ) -> JobRecord:
        if new_state not in STATES:
            raise InvalidTransition(f"unknown job state {new_state!r}")
        with self._lock:
            record = self._records.get(job_id)
            if record is None:
                raise InvalidTransition(f"no such job {job_id!r}")
            if (record.state, new_state) not in _ALLOWED:
                raise InvalidTransition(f"job {job_id} cannot move {record.state} -> {new_state}")
            record = replace(record, state=new_state, error=error, review_count=review_count)
            self._records[job_id] = record
            self._persist(record)
            return record
