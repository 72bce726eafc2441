"""Core domain records: events, entities, cohorts."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import date
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class Event:
    entity_id: str
    type_code: str
    timestamp: date  # day resolution; finer input is truncated upstream


@dataclass
class EntityRecord:
    id: str
    attributes: dict
    events: list[Event]  # sorted non-decreasing by timestamp
    outcome: int = 0  # 1 = outcome occurred
    anchors: list[date] = field(default_factory=list)  # one per inclusion constraint
    outcome_date: Optional[date] = None  # first outcome event after final anchor

    @property
    def last_event_date(self) -> Optional[date]:
        return self.events[-1].timestamp if self.events else None


@dataclass
class Cohort:
    """Outcome-labeled entity set with a stable entity order.

    Entity order is fixed for the cohort's lifetime; every occurrence
    vector and membership set downstream indexes into it.
    """

    entities: list[EntityRecord]
    outcome_vector: np.ndarray  # uint8, aligned with entities
    source_query: Optional[dict] = None
    dataset_id: Optional[str] = None
    cohort_id: str = ""
    warning: Optional[str] = None  # e.g. empty result

    def __post_init__(self):
        if not self.cohort_id:
            self.cohort_id = self.content_hash()

    def __len__(self):
        return len(self.entities)

    @property
    def n(self) -> int:
        return len(self.entities)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update((self.dataset_id or "").encode())
        h.update(json.dumps(self.source_query, sort_keys=True, default=str).encode())
        h.update(",".join(e.id for e in self.entities).encode())
        h.update(self.outcome_vector.tobytes())
        return h.hexdigest()[:16]
