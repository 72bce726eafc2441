"""Milestone timeline model and Kaplan-Meier survival curves.

Timelines are immutable versions: adding a milestone returns a new model
and never touches the original, so concurrent readers of an older version
are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCohort, NoMatchingEntities, UnknownCode, UnknownEdge
from .hierarchy import TypeHierarchy
from .model import Cohort

LOOKBACK_MILESTONE = "m_lookback"


@dataclass(frozen=True)
class Milestone:
    id: str
    type_code: str | None  # None for the lookback pseudo-milestone
    label: str


@dataclass(frozen=True)
class TimeEdge:
    id: str
    from_id: str
    to_id: str
    members: frozenset  # entity indexes traversing both anchors in order


@dataclass(frozen=True)
class Path:
    id: str
    milestone_ids: tuple
    edge_ids: tuple  # parallel to consecutive milestone pairs
    members: frozenset


@dataclass
class TimelineModel:
    cohort: Cohort
    milestones: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    paths: list = field(default_factory=list)
    anchors: dict = field(default_factory=dict)  # milestone id -> {entity: day ordinal}
    version: int = 0
    _counters: dict = field(default_factory=lambda: {"m": 0, "e": 0, "p": 0})

    @property
    def n(self):
        return len(self.cohort)

    def milestone_members(self, milestone_id) -> frozenset:
        out = set()
        for p in self.paths:
            if milestone_id in p.milestone_ids:
                out |= p.members
        return frozenset(out)

    def milestone_stats(self, milestone_id) -> dict:
        members = self.milestone_members(milestone_id)
        return self._member_stats(members)

    def edge_stats(self, edge_id) -> dict:
        edge = self.edges[edge_id]
        stats = self._member_stats(edge.members)
        a_from, a_to = self.anchors[edge.from_id], self.anchors[edge.to_id]
        days = [a_to[i] - a_from[i] for i in sorted(edge.members)]
        stats["avg_days"] = float(np.mean(days)) if days else 0.0
        return stats

    def _member_stats(self, members):
        v = self.cohort.outcome_vector
        count = len(members)
        idx = sorted(members)
        return {
            "count": count,
            "proportion": count / self.n if self.n else 0.0,
            "avg_outcome": float(v[idx].mean()) if count else 0.0,
        }

    def to_dict(self, detail=False) -> dict:
        out = {
            "version": self.version,
            "n": self.n,
            "milestones": [],
            "edges": [],
            "paths": [],
        }
        for mid in sorted(self.milestones):
            m = self.milestones[mid]
            stats = self.milestone_stats(mid)
            entry = {"id": mid, "type_code": m.type_code, "label": m.label, **stats}
            if detail:
                entry["members"] = sorted(self.milestone_members(mid))
            out["milestones"].append(entry)
        for eid in sorted(self.edges):
            e = self.edges[eid]
            entry = {"id": eid, "from": e.from_id, "to": e.to_id, **self.edge_stats(eid)}
            if detail:
                entry["members"] = sorted(e.members)
            out["edges"].append(entry)
        for p in self.paths:
            out["paths"].append(
                {
                    "id": p.id,
                    "milestones": list(p.milestone_ids),
                    "edges": list(p.edge_ids),
                    "count": len(p.members),
                }
            )
        return out

    def _next(self, kind):
        n = self._counters[kind]
        self._counters[kind] = n + 1
        return f"{kind}{n}"


def build_timeline(cohort: Cohort) -> TimelineModel:
    """Initial timeline: one milestone per inclusion constraint, all
    entities on a single path; lookback > 0 adds a leading pseudo-edge."""
    if not cohort.entities:
        raise EmptyCohort(cohort.cohort_id)
    query = cohort.source_query or {}
    inclusion = query.get("inclusion", [])
    lookback = int(query.get("lookback_days", 0))

    model = TimelineModel(cohort=cohort)
    all_members = frozenset(range(len(cohort)))
    milestone_ids = []

    if lookback > 0:
        model.milestones[LOOKBACK_MILESTONE] = Milestone(
            id=LOOKBACK_MILESTONE, type_code=None, label=f"lookback -{lookback}d"
        )
        model.anchors[LOOKBACK_MILESTONE] = {
            i: e.anchors[0].toordinal() - lookback for i, e in enumerate(cohort.entities)
        }
        milestone_ids.append(LOOKBACK_MILESTONE)

    for k, code in enumerate(inclusion):
        mid = model._next("m")
        model.milestones[mid] = Milestone(id=mid, type_code=code, label=code)
        model.anchors[mid] = {i: e.anchors[k].toordinal() for i, e in enumerate(cohort.entities)}
        milestone_ids.append(mid)

    edge_ids = []
    for a, b in zip(milestone_ids, milestone_ids[1:]):
        eid = model._next("e")
        model.edges[eid] = TimeEdge(id=eid, from_id=a, to_id=b, members=all_members)
        edge_ids.append(eid)

    model.paths = [
        Path(
            id=model._next("p"),
            milestone_ids=tuple(milestone_ids),
            edge_ids=tuple(edge_ids),
            members=all_members,
        )
    ]
    return model


def add_milestone(model: TimelineModel, edge_id: str, type_code: str,
                  hierarchy: TypeHierarchy) -> TimelineModel:
    """Split an edge around the first in-window occurrence of a type.

    Members with a subtree occurrence of ``type_code`` strictly inside the
    edge window (from, to] are rerouted through a new milestone; the rest
    follow a bypass edge. Returns a new timeline version.
    """
    if edge_id not in model.edges:
        raise UnknownEdge(edge_id)
    if type_code not in hierarchy:
        raise UnknownCode(type_code)
    edge = model.edges[edge_id]
    sub = hierarchy.subtree(type_code)
    a_from, a_to = model.anchors[edge.from_id], model.anchors[edge.to_id]

    matched_anchor: dict[int, int] = {}
    for i in edge.members:
        lo, hi = a_from[i], a_to[i]
        first = None
        for ev in model.cohort.entities[i].events:
            day = ev.timestamp.toordinal()
            if lo < day <= hi and ev.type_code in sub:
                first = day
                break
        if first is not None:
            matched_anchor[i] = first
    if not matched_anchor:
        raise NoMatchingEntities(f"{type_code} never occurs on edge {edge_id}")

    new = TimelineModel(
        cohort=model.cohort,
        milestones=dict(model.milestones),
        edges=dict(model.edges),
        paths=list(model.paths),
        anchors={k: dict(v) for k, v in model.anchors.items()},
        version=model.version + 1,
        _counters=dict(model._counters),
    )
    mid = new._next("m")
    new.milestones[mid] = Milestone(id=mid, type_code=type_code, label=type_code)
    new.anchors[mid] = matched_anchor
    matched = frozenset(matched_anchor)
    del new.edges[edge_id]

    paths = []
    for p in new.paths:
        if edge_id not in p.edge_ids:
            paths.append(p)
            continue
        pos = p.edge_ids.index(edge_id)
        through = p.members & matched
        bypass = p.members - matched
        if through:
            e1, e2 = new._next("e"), new._next("e")
            new.edges[e1] = TimeEdge(id=e1, from_id=edge.from_id, to_id=mid, members=through)
            new.edges[e2] = TimeEdge(id=e2, from_id=mid, to_id=edge.to_id, members=through)
            paths.append(
                Path(
                    id=new._next("p"),
                    milestone_ids=p.milestone_ids[: pos + 1] + (mid,) + p.milestone_ids[pos + 1:],
                    edge_ids=p.edge_ids[:pos] + (e1, e2) + p.edge_ids[pos + 1:],
                    members=through,
                )
            )
        if bypass:
            eb = new._next("e")
            new.edges[eb] = TimeEdge(id=eb, from_id=edge.from_id, to_id=edge.to_id, members=bypass)
            paths.append(
                Path(
                    id=new._next("p"),
                    milestone_ids=p.milestone_ids,
                    edge_ids=p.edge_ids[:pos] + (eb,) + p.edge_ids[pos + 1:],
                    members=bypass,
                )
            )
    new.paths = paths
    return new


@dataclass
class SurvivalCurve:
    points: list  # (t days since final anchor, S(t)); step function, S(0)=1
    censor_times: list

    def to_dict(self):
        return {
            "points": [{"t": t, "s": s} for t, s in self.points],
            "censor_times": list(self.censor_times),
        }


def kaplan_meier(cohort: Cohort) -> SurvivalCurve:
    """Product-limit estimator of time to outcome after the final anchor.

    Outcome entities contribute an event at (first outcome date - final
    anchor); the rest are censored at their last observed event (clamped
    to 0 when nothing follows the final anchor).
    """
    if not cohort.entities:
        raise EmptyCohort(cohort.cohort_id)
    times, status = [], []
    for e in cohort.entities:
        final = e.anchors[-1] if e.anchors else e.events[0].timestamp
        if e.outcome and e.outcome_date is not None:
            times.append((e.outcome_date - final).days)
            status.append(1)
        else:
            last = e.last_event_date or final
            times.append(max((last - final).days, 0))
            status.append(0)

    times = np.asarray(times)
    status = np.asarray(status)
    order = np.argsort(times, kind="stable")
    times, status = times[order], status[order]

    points = [(0, 1.0)]
    s = 1.0
    n_at_risk = len(times)
    k = 0
    censor_times = sorted(int(t) for t, st in zip(times, status) if st == 0)
    for t in np.unique(times):
        at_t = (times == t)
        d = int(status[at_t].sum())
        n_i = int(n_at_risk - k)
        if d > 0 and n_i > 0:
            s *= 1.0 - d / n_i
            points.append((int(t), s))
        k += int(at_t.sum())
    return SurvivalCurve(points=points, censor_times=censor_times)
