"""Inclusion/outcome queries, attribute filters, and analytic context windows."""

from __future__ import annotations

import json
import operator
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Optional

import numpy as np

from .errors import UnknownAttribute, UnknownCode, UnknownSelection
from .hierarchy import TypeHierarchy
from .model import Cohort, EntityRecord
from .store import Dataset

_OPS = {
    "==": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "in": lambda a, b: a in b,
}


@dataclass
class AttributeConstraint:
    attribute: str
    op: str
    value: object

    def matches(self, attrs: dict) -> bool:
        if self.attribute not in attrs:
            return False
        return bool(_OPS[self.op](attrs[self.attribute], self.value))

    def to_dict(self):
        return {"attribute": self.attribute, "op": self.op, "value": self.value}


@dataclass
class QuerySpec:
    """Ordered inclusion constraints plus an outcome constraint set.

    Each code is interpreted as its whole subtree. An entity matches when
    its first-occurrence anchors for the inclusion constraints are
    non-decreasing in constraint order; outcome = 1 when any outcome
    subtree event occurs strictly after the final anchor.
    """

    inclusion: list[str]
    outcome: list[str]
    attribute_constraints: list[AttributeConstraint] = field(default_factory=list)
    lookback_days: int = 0

    def to_dict(self):
        return {
            "inclusion": list(self.inclusion),
            "attribute_constraints": [c.to_dict() for c in self.attribute_constraints],
            "lookback_days": self.lookback_days,
            "outcome": list(self.outcome),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(
            inclusion=list(d["inclusion"]),
            outcome=list(d.get("outcome", [])),
            attribute_constraints=[
                AttributeConstraint(c["attribute"], c["op"], c["value"])
                for c in d.get("attribute_constraints", [])
            ],
            lookback_days=int(d.get("lookback_days", 0)),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _subtree_indices(hierarchy: TypeHierarchy, code: str) -> np.ndarray:
    if code not in hierarchy:
        raise UnknownCode(code)
    return np.fromiter(
        (hierarchy.index[c] for c in hierarchy.subtree(code)), dtype=np.int32
    )


def execute_query(dataset: Dataset, spec: QuerySpec) -> Cohort:
    """Run inclusion/outcome matching over a dataset; deterministic."""
    if not spec.inclusion:
        raise UnknownCode("query needs at least one inclusion constraint")
    h = dataset.hierarchy
    incl_sets = [set(_subtree_indices(h, c).tolist()) for c in spec.inclusion]
    out_set = set()
    for c in spec.outcome:
        out_set |= set(_subtree_indices(h, c).tolist())

    records = dataset.records()
    entities: list[EntityRecord] = []
    for rec in records:
        if not all(con.matches(rec.attributes) for con in spec.attribute_constraints):
            continue

        # greedy first-occurrence anchoring: earliest match at or after the
        # previous anchor, per constraint in order
        anchors: list[date] = []
        prev = date.min
        for sub in incl_sets:
            found = None
            for ev in rec.events:
                if ev.timestamp < prev:
                    continue
                if h.index[ev.type_code] in sub:
                    found = ev.timestamp
                    break
            if found is None:
                anchors = []
                break
            anchors.append(found)
            prev = found
        if not anchors:
            continue

        final = anchors[-1]
        outcome = 0
        outcome_date = None
        for ev in rec.events:
            if ev.timestamp > final and h.index[ev.type_code] in out_set:
                outcome = 1
                outcome_date = ev.timestamp
                break

        window_start = anchors[0] - timedelta(days=spec.lookback_days)
        events = [ev for ev in rec.events if ev.timestamp >= window_start]
        entities.append(
            EntityRecord(
                id=rec.id,
                attributes=dict(rec.attributes),
                events=events,
                outcome=outcome,
                anchors=anchors,
                outcome_date=outcome_date,
            )
        )

    cohort = Cohort(
        entities=entities,
        outcome_vector=np.asarray([e.outcome for e in entities], dtype=np.uint8),
        source_query=spec.to_dict(),
        dataset_id=dataset.dataset_id,
        warning="empty cohort" if not entities else None,
    )
    return cohort


def apply_attribute_filter(cohort: Cohort, constraint: AttributeConstraint) -> Cohort:
    """New cohort (fresh id, fresh indexing) keeping matching entities."""
    if not any(constraint.attribute in e.attributes for e in cohort.entities):
        raise UnknownAttribute(constraint.attribute)
    kept = [e for e in cohort.entities if constraint.matches(e.attributes)]
    query = dict(cohort.source_query or {})
    query.setdefault("attribute_constraints", [])
    query["attribute_constraints"] = query["attribute_constraints"] + [constraint.to_dict()]
    return Cohort(
        entities=kept,
        outcome_vector=np.asarray([e.outcome for e in kept], dtype=np.uint8),
        source_query=query,
        dataset_id=cohort.dataset_id,
        warning="empty cohort" if not kept else None,
    )


@dataclass
class AnalyticContext:
    """Per-entity active windows implied by a timeline selection.

    Windows are encoded half-open-on-the-left in day ordinals:
    an event at day t is in-window iff lo < t <= hi. Entities without a
    window (off the selected path) have ``active`` False.
    """

    cohort: Cohort
    active: np.ndarray  # bool per entity
    lo: np.ndarray  # int64 day ordinal, exclusive
    hi: np.ndarray  # int64 day ordinal, inclusive
    provenance: str = "whole-record"

    @property
    def context_id(self) -> str:
        return f"{self.cohort.cohort_id}:{self.provenance}"


def whole_record_context(cohort: Cohort) -> AnalyticContext:
    n = len(cohort)
    return AnalyticContext(
        cohort=cohort,
        active=np.ones(n, dtype=bool),
        lo=np.full(n, np.iinfo(np.int64).min, dtype=np.int64),
        hi=np.full(n, np.iinfo(np.int64).max, dtype=np.int64),
        provenance="whole-record",
    )


def context_window(cohort: Cohort, timeline, selection) -> AnalyticContext:
    """Window for a (kind, id) timeline selection.

    Milestone: the anchor's calendar day, per member entity.
    Edge: open-closed (anchor_from, anchor_to] per member entity.
    Non-members get an empty window.
    """
    kind, ident = selection
    n = len(cohort)
    active = np.zeros(n, dtype=bool)
    lo = np.zeros(n, dtype=np.int64)
    hi = np.zeros(n, dtype=np.int64)
    if kind == "milestone":
        if ident not in timeline.milestones:
            raise UnknownSelection(ident)
        anchors = timeline.anchors[ident]
        for i, d in anchors.items():
            active[i] = True
            lo[i] = d - 1  # same-day rule: [d, d] == (d-1, d]
            hi[i] = d
    elif kind == "edge":
        if ident not in timeline.edges:
            raise UnknownSelection(ident)
        edge = timeline.edges[ident]
        a_from = timeline.anchors[edge.from_id]
        a_to = timeline.anchors[edge.to_id]
        for i in edge.members:
            active[i] = True
            lo[i] = a_from[i]
            hi[i] = a_to[i]
    else:
        raise UnknownSelection(kind)
    return AnalyticContext(cohort=cohort, active=active, lo=lo, hi=hi, provenance=f"{kind}:{ident}")
