import numpy as np
import pytest

from cohortlens.errors import (
    EmptyCohort,
    NoMatchingEntities,
    UnknownCode,
    UnknownEdge,
)
from cohortlens.model import Cohort, EntityRecord, Event
from cohortlens.timeline import (
    LOOKBACK_MILESTONE,
    add_milestone,
    build_timeline,
    kaplan_meier,
)

from conftest import day


def _entity(eid, events, outcome=0, anchors=None, outcome_date=None):
    evs = [Event(entity_id=eid, type_code=c, timestamp=d) for c, d in events]
    return EntityRecord(
        id=eid,
        attributes={},
        events=evs,
        outcome=outcome,
        anchors=anchors or [evs[0].timestamp],
        outcome_date=outcome_date,
    )


def _cohort(entities, query=None):
    return Cohort(
        entities=entities,
        outcome_vector=np.asarray([e.outcome for e in entities], dtype=np.uint8),
        source_query=query or {"inclusion": ["A"], "outcome": ["X"]},
    )


def test_build_timeline_toy(toy_cohort):
    tl = build_timeline(toy_cohort)
    assert tl.version == 0
    assert sorted(tl.milestones) == ["m0", "m1"]
    assert sorted(tl.edges) == ["e0"]
    assert len(tl.paths) == 1
    assert tl.paths[0].members == frozenset({0, 1})
    assert tl.milestones["m0"].type_code == "A"
    assert tl.anchors["m0"] == {0: day(1).toordinal(), 1: day(4).toordinal()}


def test_lookback_pseudo_milestone(use_case_cohort):
    tl = build_timeline(use_case_cohort)
    assert LOOKBACK_MILESTONE in tl.milestones
    assert tl.milestones[LOOKBACK_MILESTONE].type_code is None
    assert tl.edges["e0"].from_id == LOOKBACK_MILESTONE
    a = tl.anchors[LOOKBACK_MILESTONE][0]
    assert tl.anchors["m0"][0] - a == 365


def test_empty_cohort_rejected():
    with pytest.raises(EmptyCohort):
        build_timeline(_cohort([]))


def test_milestone_and_edge_stats(toy_cohort):
    tl = build_timeline(toy_cohort)
    m = tl.milestone_stats("m0")
    assert m["count"] == 2 and m["proportion"] == 1.0
    assert m["avg_outcome"] == pytest.approx(0.5)
    e = tl.edge_stats("e0")
    assert e["avg_days"] == pytest.approx((4 + 2) / 2)  # A->B gaps: e1=4d, e4=2d


def test_add_milestone_split():
    ents = [
        _entity("e1", [("A", day(1)), ("X", day(15)), ("B", day(20))],
                anchors=[day(1), day(20)]),
        _entity("e2", [("A", day(1)), ("B", day(20))], anchors=[day(1), day(20)]),
    ]
    cohort = _cohort(ents, query={"inclusion": ["A", "B"], "outcome": []})
    from cohortlens.hierarchy import build_hierarchy

    h = build_hierarchy([("ROOT", ""), ("A", "ROOT"), ("B", "ROOT"), ("X", "ROOT")])
    tl = build_timeline(cohort)
    tl2 = add_milestone(tl, "e0", "X", h)

    assert tl2.version == 1
    assert tl.version == 0 and "e0" in tl.edges  # original untouched
    assert "e0" not in tl2.edges
    through = [p for p in tl2.paths if "m2" in p.milestone_ids]
    bypass = [p for p in tl2.paths if "m2" not in p.milestone_ids]
    assert len(through) == 1 and through[0].members == frozenset({0})
    assert len(bypass) == 1 and bypass[0].members == frozenset({1})
    assert tl2.anchors["m2"] == {0: day(15).toordinal()}
    # flow conservation across the split
    assert through[0].members | bypass[0].members == tl.edges["e0"].members


def test_add_milestone_all_match_no_bypass():
    ents = [
        _entity("e1", [("A", day(1)), ("X", day(5)), ("B", day(9))],
                anchors=[day(1), day(9)]),
    ]
    cohort = _cohort(ents, query={"inclusion": ["A", "B"], "outcome": []})
    from cohortlens.hierarchy import build_hierarchy

    h = build_hierarchy([("ROOT", ""), ("A", "ROOT"), ("B", "ROOT"), ("X", "ROOT")])
    tl2 = add_milestone(build_timeline(cohort), "e0", "X", h)
    assert len(tl2.paths) == 1
    assert len(tl2.paths[0].milestone_ids) == 3


def test_add_milestone_errors(use_case_dataset, use_case_cohort):
    tl = build_timeline(use_case_cohort)
    h = use_case_dataset.hierarchy
    with pytest.raises(UnknownEdge):
        add_milestone(tl, "e99", "SUB", h)
    with pytest.raises(UnknownCode):
        add_milestone(tl, "e1", "nope", h)
    with pytest.raises(NoMatchingEntities):
        add_milestone(tl, "e0", "OPI", h)  # opiates never precede the pain anchor


def test_use_case_split_counts(use_case_dataset, use_case_cohort):
    tl = build_timeline(use_case_cohort)
    tl2 = add_milestone(tl, "e1", "SUB", use_case_dataset.hierarchy)
    counts = sorted(len(p.members) for p in tl2.paths)
    assert counts == [360, 1372]
    # flow conservation at every milestone shared by both paths
    for mid in ("m0", "m1"):
        assert tl2.milestone_stats(mid)["count"] == 1732


def test_timeline_serialization(use_case_cohort):
    tl = build_timeline(use_case_cohort)
    d = tl.to_dict()
    assert d["version"] == 0 and d["n"] == 1732
    assert all("members" not in m for m in d["milestones"])
    detail = tl.to_dict(detail=True)
    assert detail["milestones"][0]["members"] == sorted(range(1732))
    assert sum(p["count"] for p in d["paths"]) == 1732


def test_kaplan_meier_example():
    # events at t=2,4; censored at 3,5,6
    ents = [
        _entity("a", [("A", day(1)), ("X", day(3))], outcome=1,
                anchors=[day(1)], outcome_date=day(3)),
        _entity("b", [("A", day(1)), ("X", day(5))], outcome=1,
                anchors=[day(1)], outcome_date=day(5)),
        _entity("c", [("A", day(1)), ("B", day(4))], anchors=[day(1)]),
        _entity("d", [("A", day(1)), ("B", day(6))], anchors=[day(1)]),
        _entity("e", [("A", day(1)), ("B", day(7))], anchors=[day(1)]),
    ]
    curve = kaplan_meier(_cohort(ents))
    assert curve.points[0] == (0, 1.0)
    assert dict(curve.points)[2] == pytest.approx(0.8, abs=1e-12)
    assert dict(curve.points)[4] == pytest.approx(8 / 15, abs=1e-12)
    assert curve.censor_times == [3, 5, 6]


def test_kaplan_meier_no_events():
    ents = [_entity("a", [("A", day(1)), ("B", day(5))], anchors=[day(1)])]
    curve = kaplan_meier(_cohort(ents))
    assert curve.points == [(0, 1.0)]


def test_kaplan_meier_all_event_at_one():
    ents = [
        _entity(f"e{i}", [("A", day(1)), ("X", day(2))], outcome=1,
                anchors=[day(1)], outcome_date=day(2))
        for i in range(3)
    ]
    curve = kaplan_meier(_cohort(ents))
    assert curve.points[-1] == (1, pytest.approx(0.0))


def test_kaplan_meier_monotone(use_case_cohort):
    curve = kaplan_meier(use_case_cohort)
    values = [s for _, s in curve.points]
    assert values[0] == 1.0
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert all(0.0 <= s <= 1.0 for s in values)


def test_kaplan_meier_empty():
    with pytest.raises(EmptyCohort):
        kaplan_meier(_cohort([]))
