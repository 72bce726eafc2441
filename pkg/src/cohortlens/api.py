"""HTTP JSON service exposing the interactive loop."""

from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import errors
from .query import QuerySpec, execute_query
from .service import AnalysisSession
from .store import ingest, load_dataset
from .synth import SyntheticSpec, generate_synthetic
from .timeline import kaplan_meier

NOT_FOUND = (
    errors.UnknownCode,
    errors.UnknownEdge,
    errors.UnknownSelection,
    errors.UnknownAttribute,
    errors.UnknownTypeCode,
)
BAD_REQUEST = (
    errors.InvalidSpec,
    errors.NoMatchingEntities,
    errors.EmptyCohort,
    errors.EmptyDataset,
    errors.ParseError,
    ValueError,
)


class DatasetManifest(BaseModel):
    dataset_id: Optional[str] = None
    path: Optional[str] = None  # existing snapshot directory
    events: Optional[str] = None
    hierarchy: Optional[str] = None
    attributes: Optional[str] = None
    synthetic: Optional[dict] = None


class SelectionRequest(BaseModel):
    milestone: Optional[str] = None
    edge: Optional[str] = None
    whole_record: bool = False


class MilestoneRequest(BaseModel):
    edge: str
    code: str


def create_app(data_dir=None, static_dir=None) -> FastAPI:
    app = FastAPI(title="cohortlens")
    app.state.datasets = {}
    app.state.sessions = {}

    def _dataset(d):
        ds = app.state.datasets.get(d)
        if ds is None:
            raise HTTPException(404, detail={"error": "unknown dataset", "id": d})
        return ds

    def _session(c) -> AnalysisSession:
        s = app.state.sessions.get(c)
        if s is None:
            raise HTTPException(404, detail={"error": "unknown cohort", "id": c})
        return s

    def _wrap(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NOT_FOUND as exc:
            raise HTTPException(404, detail={"error": type(exc).__name__, "message": str(exc)})
        except BAD_REQUEST as exc:
            raise HTTPException(400, detail={"error": type(exc).__name__, "message": str(exc)})

    @app.post("/datasets")
    def post_dataset(manifest: DatasetManifest):
        if manifest.path:
            ds = _wrap(load_dataset, manifest.path)
        elif manifest.synthetic is not None:
            ds = _wrap(generate_synthetic, SyntheticSpec(**manifest.synthetic))
        elif manifest.events and manifest.hierarchy:
            ds = _wrap(
                ingest,
                manifest.events,
                manifest.hierarchy,
                manifest.attributes,
                dataset_id=manifest.dataset_id or "dataset",
            )
        else:
            raise HTTPException(400, detail={"error": "manifest needs path, synthetic, or events+hierarchy"})
        if manifest.dataset_id:
            ds.dataset_id = manifest.dataset_id
        app.state.datasets[ds.dataset_id] = ds
        return {
            "dataset_id": ds.dataset_id,
            "n_entities": ds.n_entities,
            "n_events": ds.n_events,
            "n_event_types": len(ds.hierarchy),
        }

    @app.post("/datasets/{d}/query")
    def post_query(d: str, spec: dict):
        ds = _dataset(d)
        cohort = _wrap(execute_query, ds, QuerySpec.from_dict(spec))
        session = AnalysisSession(ds, cohort)
        app.state.sessions[cohort.cohort_id] = session
        return {
            "cohort_id": cohort.cohort_id,
            "n": len(cohort),
            "positive": int(cohort.outcome_vector.sum()),
            "warning": cohort.warning,
        }

    @app.get("/cohorts/{c}/timeline")
    def get_timeline(c: str, version: Optional[int] = None, detail: bool = False):
        s = _session(c)
        return _wrap(lambda: s.timeline_version(version).to_dict(detail=detail))

    @app.post("/cohorts/{c}/selection")
    def post_selection(c: str, req: SelectionRequest):
        s = _session(c)
        if req.whole_record:
            key = s.select("whole-record", None)
        elif req.milestone:
            key = _wrap(s.select, "milestone", req.milestone)
        elif req.edge:
            key = _wrap(s.select, "edge", req.edge)
        else:
            raise HTTPException(400, detail={"error": "selection needs milestone, edge, or whole_record"})
        return {"selection": key, "timeline_version": s.current_timeline.version}

    @app.get("/cohorts/{c}/scatter")
    def get_scatter(c: str, R: float = 0.0):
        return _wrap(_session(c).scatter, r=R)

    @app.get("/cohorts/{c}/focus/{code}")
    def get_focus(c: str, code: str):
        return _wrap(_session(c).focus, code)

    @app.post("/cohorts/{c}/milestones")
    def post_milestone(c: str, req: MilestoneRequest):
        s = _session(c)
        version = _wrap(s.add_milestone, req.edge, req.code)
        return {"timeline_version": version}

    @app.get("/cohorts/{c}/survival")
    def get_survival(c: str):
        return _wrap(lambda: kaplan_meier(_session(c).cohort).to_dict())

    @app.get("/cohorts/{c}/attributes")
    def get_attributes(c: str):
        return _session(c).attributes_summary()

    @app.get("/cohorts/{c}/events/table")
    def get_events_table(c: str, sort: str = "seq_count", limit: Optional[int] = None):
        return _wrap(_session(c).events_table, sort=sort, limit=limit)

    if data_dir:
        for name in sorted(os.listdir(data_dir)):
            path = os.path.join(data_dir, name)
            if os.path.isfile(os.path.join(path, "manifest.json")):
                ds = load_dataset(path)
                app.state.datasets[ds.dataset_id] = ds

    if static_dir and os.path.isdir(static_dir):
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
