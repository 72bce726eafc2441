"""Deterministic synthetic dataset generation and study fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

from .errors import InvalidSpec
from .hierarchy import ROOT_CODE, TypeHierarchy, build_hierarchy
from .store import Dataset, dataset_from_records

EPOCH = date(2015, 1, 1)


@dataclass(frozen=True)
class ForcedSubtree:
    """Exact roll-up targets for one interior code and its children."""

    code: str
    n_children: int
    total_occurrences: int  # raw events anywhere in the subtree
    direct_occurrences: int  # raw events carrying the interior code itself
    carriers: int  # distinct entities with >= 1 subtree event


@dataclass
class SyntheticSpec:
    n_entities: int = 1000
    n_leaves: int = 200
    branching: int = 8
    depth: int = 4
    mean_seq_len: float = 20.0
    outcome_rate: float = 0.2
    outcome_code: str = "OUT"
    # odds multipliers applied when the entity has >= 1 event under the code
    subtree_odds: dict = field(default_factory=dict)
    span_days: int = 1095
    zipf_a: float = 1.4
    seed: int = 0
    forced_subtrees: list[ForcedSubtree] = field(default_factory=list)

    def validate(self):
        if self.n_entities <= 0 or self.n_leaves <= 0:
            raise InvalidSpec("counts must be positive")
        if self.branching < 2 or self.depth < 1:
            raise InvalidSpec("branching >= 2 and depth >= 1 required")
        if self.mean_seq_len < 1:
            raise InvalidSpec("mean sequence length must be >= 1")
        if not 0.0 <= self.outcome_rate <= 1.0:
            raise InvalidSpec("outcome_rate must be in [0, 1]")
        for f in self.forced_subtrees:
            if f.carriers > self.n_entities:
                raise InvalidSpec("forced carriers exceed n_entities")
            if f.direct_occurrences > f.total_occurrences or f.total_occurrences < f.carriers:
                raise InvalidSpec("inconsistent forced subtree counts")


def balanced_hierarchy(n_leaves, branching, extra_top=()) -> TypeHierarchy:
    """Rooted tree with exactly ``n_leaves`` leaves, built breadth-first.

    ``extra_top`` codes are grafted directly under the root and are not
    counted against ``n_leaves``.
    """
    edges = [(ROOT_CODE, "", ROOT_CODE)]
    queue = [ROOT_CODE]
    leaves = 1  # the root counts as a leaf until it gets children
    head = 0
    while leaves < n_leaves:
        node = queue[head]
        head += 1
        k = min(branching, n_leaves - leaves + 1)
        for i in range(k):
            child = f"{node}.{i}" if node != ROOT_CODE else f"n{i}"
            edges.append((child, node, child))
            queue.append(child)
        leaves += k - 1
    for code in extra_top:
        edges.append((code, ROOT_CODE, code))
    return build_hierarchy(edges)


def _forced_hierarchy_edges(forced: list[ForcedSubtree]):
    edges = []
    for f in forced:
        edges.append((f.code, ROOT_CODE, f.code))
        for i in range(f.n_children):
            child = f"{f.code}.{i + 1}"
            edges.append((child, f.code, child))
    return edges


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """Generate a dataset; identical specs (same seed) yield identical data."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)

    extra = [spec.outcome_code]
    forced_edges = _forced_hierarchy_edges(spec.forced_subtrees)
    hierarchy = balanced_hierarchy(spec.n_leaves, spec.branching)
    edges = hierarchy.to_edges() + [(c, p, l) for c, p, l in forced_edges]
    edges += [(spec.outcome_code, ROOT_CODE, spec.outcome_code)]
    hierarchy = build_hierarchy(edges)

    leaves = [c for c in hierarchy.leaves if c not in extra]
    leaves = [c for c in leaves if not any(c.startswith(f.code) for f in spec.forced_subtrees)]
    weights = 1.0 / np.arange(1, len(leaves) + 1) ** spec.zipf_a
    weights /= weights.sum()

    records = []
    ids = [f"p{i:06d}" for i in range(spec.n_entities)]

    # base background sequences (>= 1 event each)
    lens = np.maximum(1, rng.poisson(spec.mean_seq_len, size=spec.n_entities))
    for i, eid in enumerate(ids):
        picks = rng.choice(len(leaves), size=lens[i], p=weights)
        days = rng.integers(0, spec.span_days, size=lens[i])
        age = int(rng.integers(20, 90))
        sex = "F" if rng.random() < 0.5 else "M"
        attrs = {"age": age, "sex": sex}
        for k in range(lens[i]):
            records.append((eid, leaves[picks[k]], EPOCH + timedelta(days=int(days[k])), attrs))

    # forced subtrees: exact roll-up counts by round-robin distribution
    for f in spec.forced_subtrees:
        child_codes = [f"{f.code}.{i + 1}" for i in range(f.n_children)]
        carrier_ids = ids[: f.carriers]
        placed = 0
        for k in range(f.total_occurrences):
            code = f.code if k < f.direct_occurrences else child_codes[(k - f.direct_occurrences) % f.n_children]
            eid = carrier_ids[k % f.carriers]
            d = EPOCH + timedelta(days=int((k * 7) % spec.span_days))
            records.append((eid, code, d, None))
            placed += 1
        assert placed == f.total_occurrences

    # outcome labels: logistic-ish odds model over subtree membership
    has_subtree = {}
    for code in spec.subtree_odds:
        sub = hierarchy.subtree(code)
        has_subtree[code] = [False] * spec.n_entities
    idx = {eid: i for i, eid in enumerate(ids)}
    if spec.subtree_odds:
        subsets = {code: hierarchy.subtree(code) for code in spec.subtree_odds}
        for rec in records:
            for code, sub in subsets.items():
                if rec[1] in sub:
                    has_subtree[code][idx[rec[0]]] = True

    base_odds = spec.outcome_rate / (1 - spec.outcome_rate) if spec.outcome_rate < 1 else np.inf
    for i, eid in enumerate(ids):
        odds = base_odds
        for code, mult in spec.subtree_odds.items():
            if has_subtree[code][i]:
                odds *= mult
        p = odds / (1 + odds) if np.isfinite(odds) else 1.0
        if rng.random() < p:
            records.append((eid, spec.outcome_code, EPOCH + timedelta(days=spec.span_days + 30), None))

    return dataset_from_records(f"synthetic-{spec.seed}", hierarchy, records)


def heart_failure_fixture() -> Dataset:
    """Diabetes-cohort-shaped fixture with exact heart-failure roll-ups.

    16,983 entities; the I50 subtree carries 26,153 raw occurrences
    (10,739 at I50 itself, the rest across 13 subtype codes) spread over
    5,084 distinct carrier entities.
    """
    spec = SyntheticSpec(
        n_entities=16_983,
        n_leaves=50,
        branching=8,
        depth=2,
        mean_seq_len=3.0,
        outcome_rate=0.1,
        seed=150,
        forced_subtrees=[
            ForcedSubtree(
                code="I50",
                n_children=13,
                total_occurrences=26_153,
                direct_occurrences=10_739,
                carriers=5_084,
            )
        ],
    )
    return generate_synthetic(spec)


def opiate_use_case_fixture() -> Dataset:
    """Constructive fixture for the pain -> discharge walkthrough.

    Exactly 1,732 entities match inclusion [PAIN, DISCH] with 121 (~7%)
    developing an OPI-subtree event after discharge; 360 of the matching
    entities have a SUB (substance abuse) subtree event strictly between
    the pain and discharge anchors.
    """
    edges = [
        (ROOT_CODE, "", "root"),
        ("PAIN", ROOT_CODE, "pain"),
        ("DISCH", ROOT_CODE, "hospital discharge"),
        ("SUB", ROOT_CODE, "substance abuse"),
        ("SUB.NIC", "SUB", "nicotine dependence"),
        ("SUB.ALC", "SUB", "alcohol abuse"),
        ("OPI", ROOT_CODE, "opiate related disorders"),
        ("OPI.1", "OPI", "opiate abuse"),
        ("HEART", ROOT_CODE, "heart procedures"),
        ("HEART.ECG", "HEART", "ECG"),
        ("OTHER", ROOT_CODE, "other"),
    ]
    hierarchy = build_hierarchy(edges)
    records = []
    n_match, n_pos, n_sub = 1732, 121, 360
    for i in range(n_match):
        eid = f"u{i:05d}"
        pain = EPOCH + timedelta(days=400 + (i % 50))
        disch = pain + timedelta(days=10 + (i % 20))
        records.append((eid, "OTHER", pain - timedelta(days=200), {"age": 30 + i % 50}))
        records.append((eid, "PAIN", pain, None))
        if i < n_sub:
            # substance abuse strictly inside the pain -> discharge window
            records.append((eid, "SUB.NIC", pain + timedelta(days=3), None))
        records.append((eid, "DISCH", disch, None))
        if i % 5 == 0:
            records.append((eid, "HEART.ECG", disch + timedelta(days=5), None))
        if i < n_pos:
            records.append((eid, "OPI.1", disch + timedelta(days=30), None))
    # non-matching entities: discharge before pain, or no discharge
    for i in range(300):
        eid = f"x{i:05d}"
        d0 = EPOCH + timedelta(days=100 + i % 30)
        records.append((eid, "DISCH", d0, {"age": 40}))
        if i % 2 == 0:
            records.append((eid, "PAIN", d0 + timedelta(days=10), None))
    return dataset_from_records("use-case", hierarchy, records)
