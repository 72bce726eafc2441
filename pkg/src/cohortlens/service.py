"""Analysis session: the interactive loop over one cohort.

Holds immutable timeline versions plus a recompute cache keyed by
(timeline version, selection, R); changing R or the selection never
mutates cohort or timeline state.
"""

from __future__ import annotations

import numpy as np

from .cut import CutParams, informative_cut, scent
from .errors import UnknownSelection
from .hierarchy import TypeHierarchy
from .layout import focus_layout, hexbin
from .model import Cohort
from .query import AnalyticContext, context_window, whole_record_context
from .stats import stats_for_all_types
from .store import Dataset
from .timeline import add_milestone, build_timeline

DEFAULT_HEX_RADIUS = 0.04


class AnalysisSession:
    def __init__(self, dataset: Dataset, cohort: Cohort):
        self.dataset = dataset
        self.hierarchy: TypeHierarchy = dataset.hierarchy
        self.cohort = cohort
        self.timelines = [build_timeline(cohort)] if cohort.entities else []
        self.selection = None  # (kind, id) or None = whole record
        self._stats_cache: dict = {}
        self._cut_cache: dict = {}

    # -- state --

    @property
    def current_timeline(self):
        return self.timelines[-1]

    def timeline_version(self, version=None):
        if version is None:
            return self.current_timeline
        for t in self.timelines:
            if t.version == version:
                return t
        raise UnknownSelection(f"timeline version {version}")

    def select(self, kind, ident):
        """Set the analytic context; validates against the current timeline."""
        if kind == "whole-record":
            self.selection = None
        else:
            # context_window raises UnknownSelection for bad ids
            context_window(self.cohort, self.current_timeline, (kind, ident))
            self.selection = (kind, ident)
        return self.selection_key()

    def selection_key(self):
        if self.selection is None:
            return "whole-record"
        return f"{self.selection[0]}:{self.selection[1]}"

    def context(self) -> AnalyticContext:
        if self.selection is None:
            return whole_record_context(self.cohort)
        return context_window(self.cohort, self.current_timeline, self.selection)

    # -- analytics --

    def stats(self):
        key = (self.current_timeline.version, self.selection_key())
        if key not in self._stats_cache:
            self._stats_cache[key] = stats_for_all_types(self.context(), self.hierarchy)
        return self._stats_cache[key]

    def cut(self, r=0.0):
        key = (self.current_timeline.version, self.selection_key(), float(r))
        if key not in self._cut_cache:
            self._cut_cache[key] = informative_cut(self.stats(), self.hierarchy, CutParams(r))
        return self._cut_cache[key]

    def scatter(self, r=0.0, hex_radius=DEFAULT_HEX_RADIUS) -> dict:
        stats = self.stats()
        cut = self.cut(r)
        marks = []
        for code in cut.post_filter:
            s = stats[code]
            marks.append(
                {
                    "code": code,
                    "label": self.hierarchy.nodes[code].label,
                    "x": s.correlation,
                    "y": s.prevalence,
                    "chi2": s.chi2,
                    "p_value": s.p_value,
                    "seq_count": s.seq_count,
                    "occ_count": s.occ_count,
                }
            )
        points = list(zip(stats.correlation.tolist(), stats.prevalence.tolist()))
        grid = hexbin(points, radius=hex_radius)
        y_top = float(stats.prevalence.max()) if len(stats.prevalence) else 1.0
        return {
            "cohort_id": self.cohort.cohort_id,
            "timeline_version": self.current_timeline.version,
            "selection": self.selection_key(),
            "r": float(r),
            "pre_filter_size": len(cut.pre_filter),
            "pre_filter": list(cut.pre_filter),
            "marks": marks,
            "hexbins": grid.to_dict(),
            "axis_domains": {"x": [-1.0, 1.0], "y": [0.0, max(y_top, 1e-9)]},
        }

    def focus(self, code, mark_diameter=None) -> dict:
        stats = self.stats()
        scents = scent(stats, self.hierarchy)
        fl = focus_layout(stats, self.hierarchy, code, mark_diameter=mark_diameter, scents=scents)
        payload = fl.to_dict()
        payload["selection"] = self.selection_key()
        payload["timeline_version"] = self.current_timeline.version
        payload["focus_stats"] = {
            "prevalence": stats[code].prevalence,
            "correlation": stats[code].correlation,
            "seq_count": stats[code].seq_count,
            "is_leaf": self.hierarchy.is_leaf(code),
        }
        return payload

    def add_milestone(self, edge_id, type_code) -> int:
        """Create a new timeline version; returns its version number."""
        new = add_milestone(self.current_timeline, edge_id, type_code, self.hierarchy)
        self.timelines.append(new)
        # old selections may not resolve in the new version
        self.selection = None
        return new.version

    def attributes_summary(self) -> dict:
        by_attr: dict[str, list] = {}
        for e in self.cohort.entities:
            for k, v in e.attributes.items():
                by_attr.setdefault(k, []).append(v)
        out = {}
        for name in sorted(by_attr):
            values = by_attr[name]
            if all(isinstance(v, (int, float)) for v in values):
                arr = np.asarray(values, dtype=float)
                counts, edges = np.histogram(arr, bins=10)
                out[name] = {
                    "kind": "numeric",
                    "count": len(values),
                    "min": float(arr.min()),
                    "max": float(arr.max()),
                    "mean": float(arr.mean()),
                    "histogram": {
                        "counts": counts.tolist(),
                        "edges": [float(e) for e in edges],
                    },
                }
            else:
                freq: dict = {}
                for v in values:
                    freq[str(v)] = freq.get(str(v), 0) + 1
                out[name] = {"kind": "categorical", "count": len(values), "values": freq}
        return out

    def events_table(self, sort="seq_count", limit=None) -> list[dict]:
        if sort not in ("seq_count", "occ_count", "correlation"):
            raise UnknownSelection(f"sort key {sort}")
        stats = self.stats()
        rows = []
        for code in stats.codes:
            s = stats[code]
            if s.seq_count == 0:
                continue
            rows.append(
                {
                    "code": code,
                    "label": self.hierarchy.nodes[code].label,
                    "seq_count": s.seq_count,
                    "occ_count": s.occ_count,
                    "prevalence": s.prevalence,
                    "chi2": s.chi2,
                    "p_value": s.p_value,
                    "correlation": s.correlation,
                }
            )
        rows.sort(key=lambda r: (-r[sort], r["code"]))
        return rows[:limit] if limit else rows
