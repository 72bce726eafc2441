"""Occurrence roll-ups, contingency tables, and per-node informativeness.

The per-context recompute over the full hierarchy is the hot path of the
interactive loop, so occurrence vectors are held as packed bitsets
(one row per hierarchy node) and rolled up bottom-up with bitwise OR.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2 as chi2_dist

from .errors import EmptyCohort
from .hierarchy import TypeHierarchy
from .query import AnalyticContext


@dataclass
class ContingencyTable:
    """2x2 event-occurrence vs outcome table."""

    n00: int
    n01: int
    n10: int
    n11: int

    @property
    def n0_(self):
        return self.n00 + self.n01

    @property
    def n1_(self):
        return self.n10 + self.n11

    @property
    def n_0(self):
        return self.n00 + self.n10

    @property
    def n_1(self):
        return self.n01 + self.n11

    @property
    def n(self):
        return self.n00 + self.n01 + self.n10 + self.n11

    @classmethod
    def from_vectors(cls, t: np.ndarray, v: np.ndarray) -> "ContingencyTable":
        t = np.asarray(t, dtype=bool)
        v = np.asarray(v, dtype=bool)
        return cls(
            n00=int(np.sum(~t & ~v)),
            n01=int(np.sum(~t & v)),
            n10=int(np.sum(t & ~v)),
            n11=int(np.sum(t & v)),
        )


def chi_square_yates(t: ContingencyTable) -> float:
    """Yates-corrected chi-square; 0 whenever any margin is zero."""
    denom = float(t.n_0) * t.n_1 * t.n0_ * t.n1_
    if denom == 0.0:
        return 0.0
    det = float(t.n00) * t.n11 - float(t.n01) * t.n10
    corrected = max(abs(det) - t.n / 2.0, 0.0)
    return t.n * corrected * corrected / denom


def correlation(t: ContingencyTable) -> float:
    """Signed phi coefficient; 0 on zero denominator."""
    denom = float(t.n_0) * t.n_1 * t.n0_ * t.n1_
    if denom == 0.0:
        return 0.0
    det = float(t.n00) * t.n11 - float(t.n01) * t.n10
    return det / np.sqrt(denom)


@dataclass
class OccurrenceVector:
    type_code: str
    bits: np.ndarray  # bool, aligned with cohort entity order


@dataclass
class EventTypeStats:
    type_code: str
    seq_count: int  # entities with >= 1 in-window subtree occurrence
    occ_count: int  # raw in-window occurrences over the subtree
    prevalence: float
    chi2: float
    p_value: float
    correlation: float


class HierarchyStats:
    """Per-node stats for one analytic context, array- and dict-addressable.

    Arrays are aligned with ``hierarchy.topo_order``.
    """

    def __init__(self, hierarchy, codes, seq_count, occ_count, prevalence, chi2, p_value, rho):
        self.hierarchy = hierarchy
        self.codes = codes
        self.seq_count = seq_count
        self.occ_count = occ_count
        self.prevalence = prevalence
        self.chi2 = chi2
        self.p_value = p_value
        self.correlation = rho
        self._by_code = None

    def __getitem__(self, code) -> EventTypeStats:
        i = self.hierarchy.index[code]
        return EventTypeStats(
            type_code=code,
            seq_count=int(self.seq_count[i]),
            occ_count=int(self.occ_count[i]),
            prevalence=float(self.prevalence[i]),
            chi2=float(self.chi2[i]),
            p_value=float(self.p_value[i]),
            correlation=float(self.correlation[i]),
        )

    def __contains__(self, code):
        return code in self.hierarchy.index

    def __iter__(self):
        return iter(self.codes)

    def items(self):
        return ((c, self[c]) for c in self.codes)


def _flatten_events(cohort, hierarchy):
    """Flatten cohort events into (entity_idx, code_idx, day) arrays.

    Cached on the cohort (immutable after construction), keyed by the
    hierarchy identity so code indexes stay valid.
    """
    cache = getattr(cohort, "_flat_events", None)
    if cache is not None and cache[0] == id(hierarchy):
        return cache[1]
    index = hierarchy.index
    ents, codes, days = [], [], []
    for i, rec in enumerate(cohort.entities):
        for ev in rec.events:
            ents.append(i)
            codes.append(index[ev.type_code])
            days.append(ev.timestamp.toordinal())
    arrays = (
        np.asarray(ents, dtype=np.int64),
        np.asarray(codes, dtype=np.int64),
        np.asarray(days, dtype=np.int64),
    )
    cohort._flat_events = (id(hierarchy), arrays)
    return arrays


def _direct_occurrences(ctx: AnalyticContext, hierarchy: TypeHierarchy, col_map=None):
    """Per-node direct (non-rolled-up) bit matrix and occurrence counts.

    ``col_map`` optionally permutes entity columns (used by the stats hot
    path to keep outcome-positive entities contiguous).
    """
    n_nodes = len(hierarchy)
    n = len(ctx.cohort)
    ent_idx, code_ids, days = _flatten_events(ctx.cohort, hierarchy)
    mask = ctx.active[ent_idx] & (days > ctx.lo[ent_idx]) & (days <= ctx.hi[ent_idx])
    cols = ent_idx[mask] if col_map is None else col_map[ent_idx[mask]]
    bits = np.zeros((n_nodes, n), dtype=bool)
    bits[code_ids[mask], cols] = True
    occ = np.bincount(code_ids[mask], minlength=n_nodes).astype(np.int64)
    return bits, occ


def _rollup(bits, occ, hierarchy):
    """Bottom-up union of child bits and sum of child occurrence counts."""
    order = hierarchy.topo_order
    idx = hierarchy.index
    for code in reversed(order):
        parent = hierarchy.nodes[code].parent
        if parent is None:
            continue
        pi, ci = idx[parent], idx[code]
        np.logical_or(bits[pi], bits[ci], out=bits[pi])
        occ[pi] += occ[ci]
    return bits, occ


def occurrence_vectors(ctx: AnalyticContext, hierarchy: TypeHierarchy) -> dict[str, OccurrenceVector]:
    """Rolled-up binary occurrence vector for every hierarchy node."""
    bits, occ = _rollup(*_direct_occurrences(ctx, hierarchy), hierarchy)
    return {
        code: OccurrenceVector(type_code=code, bits=bits[hierarchy.index[code]])
        for code in hierarchy.topo_order
    }


def stats_for_all_types(ctx: AnalyticContext, hierarchy: TypeHierarchy) -> HierarchyStats:
    """Contingency statistics for every hierarchy node under the context."""
    cohort = ctx.cohort
    n = len(cohort)
    if n == 0:
        raise EmptyCohort(cohort.cohort_id)
    v = cohort.outcome_vector.astype(bool)
    n_1 = int(v.sum())
    n_0 = n - n_1

    # positive-outcome entities occupy the first n_1 columns so n11 is a
    # contiguous-slice popcount instead of a fancy-indexed copy
    col_map = np.empty(n, dtype=np.int64)
    col_map[np.argsort(~v, kind="stable")] = np.arange(n)
    bits, occ = _rollup(*_direct_occurrences(ctx, hierarchy, col_map=col_map), hierarchy)

    seq = np.count_nonzero(bits, axis=1).astype(np.int64)  # n1. per node
    n11 = np.count_nonzero(bits[:, :n_1], axis=1).astype(np.int64)
    n10 = seq - n11
    n01 = n_1 - n11
    n00 = n_0 - n10

    det = n00.astype(np.float64) * n11 - n01.astype(np.float64) * n10
    denom = float(n_0) * n_1 * (seq.astype(np.float64) * (n - seq))
    corrected = np.maximum(np.abs(det) - n / 2.0, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        chi2 = np.where(denom > 0, n * corrected * corrected / denom, 0.0)
        rho = np.where(denom > 0, det / np.sqrt(denom), 0.0)
    p_value = chi2_dist.sf(chi2, df=1)

    return HierarchyStats(
        hierarchy=hierarchy,
        codes=list(hierarchy.topo_order),
        seq_count=seq,
        occ_count=occ,
        prevalence=seq / n,
        chi2=chi2,
        p_value=p_value,
        rho=rho,
    )


STATS_CSV_COLUMNS = ["code", "label", "seq_count", "occ_count", "prevalence", "chi2", "p_value", "correlation"]


def write_stats_csv(stats: HierarchyStats, path, codes=None):
    """Export stats as delimited text, one row per node (or per given code)."""
    hierarchy = stats.hierarchy
    codes = list(codes) if codes is not None else stats.codes
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(STATS_CSV_COLUMNS)
        for code in codes:
            s = stats[code]
            w.writerow(
                [
                    code,
                    hierarchy.nodes[code].label,
                    s.seq_count,
                    s.occ_count,
                    f"{s.prevalence:.10g}",
                    f"{s.chi2:.10g}",
                    f"{s.p_value:.10g}",
                    f"{s.correlation:.10g}",
                ]
            )
