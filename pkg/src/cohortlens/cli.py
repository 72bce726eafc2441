"""Command-line interface mirroring the HTTP endpoints.

Cohort state lives in a small session directory: the dataset reference,
the query spec, the milestone-addition log, and the current selection.
Queries are deterministic, so sessions are rebuilt by replay on load.
"""

from __future__ import annotations

import csv as csv_mod
import json
import os
import sys

import click

from .query import QuerySpec, execute_query
from .service import AnalysisSession
from .store import ingest as ingest_fn, load_dataset, save_dataset
from .synth import ForcedSubtree, SyntheticSpec, generate_synthetic
from .timeline import kaplan_meier
from . import report

SESSION_FILE = "session.json"


def _load_session(cohort_dir) -> AnalysisSession:
    with open(os.path.join(cohort_dir, SESSION_FILE), encoding="utf-8") as fh:
        state = json.load(fh)
    dataset = load_dataset(state["dataset_dir"])
    cohort = execute_query(dataset, QuerySpec.from_dict(state["query"]))
    session = AnalysisSession(dataset, cohort)
    for op in state.get("milestone_ops", []):
        session.add_milestone(op["edge"], op["code"])
    sel = state.get("selection")
    if sel:
        session.select(sel["kind"], sel["id"])
    return session


def _save_session_state(cohort_dir, state):
    os.makedirs(cohort_dir, exist_ok=True)
    with open(os.path.join(cohort_dir, SESSION_FILE), "w", encoding="utf-8") as fh:
        json.dump(state, fh, indent=1, sort_keys=True)


def _update_session(cohort_dir, **changes):
    with open(os.path.join(cohort_dir, SESSION_FILE), encoding="utf-8") as fh:
        state = json.load(fh)
    state.update(changes)
    _save_session_state(cohort_dir, state)
    return state


def _emit(payload, out):
    text = json.dumps(payload, indent=1, sort_keys=True, default=str)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@click.group()
def main():
    """Analytics engine for outcome-labeled event sequences with
    hierarchical event types."""


@main.command()
@click.option("--events", required=True, type=click.Path(exists=True))
@click.option("--hierarchy", "hierarchy_path", required=True, type=click.Path(exists=True))
@click.option("--attributes", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--dataset-id", default="dataset")
def ingest(events, hierarchy_path, attributes, out, dataset_id):
    """Parse and persist a dataset snapshot."""
    ds = ingest_fn(events, hierarchy_path, attributes, dataset_id=dataset_id)
    save_dataset(ds, out)
    _emit({"dataset_id": ds.dataset_id, "n_entities": ds.n_entities, "n_events": ds.n_events}, None)


@main.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def synth(spec_path, out):
    """Generate a deterministic synthetic dataset from a JSON spec."""
    with open(spec_path, encoding="utf-8") as fh:
        raw = json.load(fh)
    raw["forced_subtrees"] = [ForcedSubtree(**f) for f in raw.get("forced_subtrees", [])]
    ds = generate_synthetic(SyntheticSpec(**raw))
    save_dataset(ds, out)
    _emit({"dataset_id": ds.dataset_id, "n_entities": ds.n_entities, "n_events": ds.n_events}, None)


@main.command()
@click.option("--dataset", "dataset_dir", required=True, type=click.Path(exists=True))
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("--out", "cohort_dir", required=True, type=click.Path())
def query(dataset_dir, spec_path, cohort_dir):
    """Execute an inclusion/outcome query; creates a cohort session."""
    with open(spec_path, encoding="utf-8") as fh:
        spec = json.load(fh)
    dataset = load_dataset(dataset_dir)
    cohort = execute_query(dataset, QuerySpec.from_dict(spec))
    _save_session_state(
        cohort_dir,
        {
            "dataset_dir": os.path.abspath(dataset_dir),
            "query": spec,
            "milestone_ops": [],
            "selection": None,
        },
    )
    _emit(
        {
            "cohort_id": cohort.cohort_id,
            "n": len(cohort),
            "positive": int(cohort.outcome_vector.sum()),
            "warning": cohort.warning,
        },
        None,
    )


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--edge")
@click.option("--milestone")
@click.option("--whole-record", is_flag=True)
def select(cohort_dir, edge, milestone, whole_record):
    """Set the analytic context (timeline selection) for the session."""
    if whole_record:
        sel = None
    elif edge:
        sel = {"kind": "edge", "id": edge}
    elif milestone:
        sel = {"kind": "milestone", "id": milestone}
    else:
        raise click.UsageError("need --edge, --milestone, or --whole-record")
    session = _load_session(cohort_dir)
    if sel:
        session.select(sel["kind"], sel["id"])  # validates
    _update_session(cohort_dir, selection=sel)
    _emit({"selection": session.selection_key() if sel else "whole-record"}, None)


def _selection_override(session, selection):
    if selection:
        kind, ident = selection.split(":", 1)
        session.select(kind, ident)


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--r", default=0.0, show_default=True)
@click.option("--selection", help="override, e.g. edge:e1 or milestone:m0")
@click.option("--out", type=click.Path())
@click.option("--fig", type=click.Path(), help="render the scatter to an image file")
def scatter(cohort_dir, r, selection, out, fig):
    """Informative-cut scatter payload (marks + hexmap + axes)."""
    session = _load_session(cohort_dir)
    _selection_override(session, selection)
    payload = session.scatter(r=r)
    if fig:
        report.scatter_figure(payload, fig)
    _emit(payload, out)


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--r", default=0.0, show_default=True)
@click.option("--selection", help="override, e.g. edge:e1")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", type=click.Path())
def cut(cohort_dir, r, selection, fmt, out):
    """Informative cut joined with per-node statistics."""
    session = _load_session(cohort_dir)
    _selection_override(session, selection)
    result = session.cut(r=r)
    stats = session.stats()
    rows = []
    for code in result.pre_filter:
        s = stats[code]
        rows.append(
            {
                "code": code,
                "in_post_filter": code in result.post_filter,
                "seq_count": s.seq_count,
                "occ_count": s.occ_count,
                "prevalence": s.prevalence,
                "chi2": s.chi2,
                "p_value": s.p_value,
                "correlation": s.correlation,
            }
        )
    if fmt == "csv":
        fh = open(out, "w", newline="", encoding="utf-8") if out else sys.stdout
        w = csv_mod.DictWriter(fh, fieldnames=list(rows[0].keys()) if rows else ["code"])
        w.writeheader()
        w.writerows(rows)
        if out:
            fh.close()
    else:
        _emit({"r": r, "pre_filter_size": len(result.pre_filter), "rows": rows}, out)


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--code", required=True)
@click.option("--selection", help="override, e.g. edge:e1")
@click.option("--out", type=click.Path())
@click.option("--fig", type=click.Path(), help="render the focus view to an image file")
def focus(cohort_dir, code, selection, out, fig):
    """Focused dual-view layout for one event type."""
    session = _load_session(cohort_dir)
    _selection_override(session, selection)
    payload = session.focus(code)
    if fig:
        report.focus_figure(payload, fig)
    _emit(payload, out)


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--detail", is_flag=True, help="include full member lists")
@click.option("--out", type=click.Path())
@click.option("--fig", type=click.Path(), help="render the timeline to an image file")
def timeline(cohort_dir, detail, out, fig):
    """Current timeline version with milestone/edge statistics."""
    session = _load_session(cohort_dir)
    payload = session.current_timeline.to_dict(detail=detail)
    if fig:
        report.timeline_figure(payload, fig)
    _emit(payload, out)


@main.command(name="add-milestone")
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--edge", required=True)
@click.option("--code", required=True)
def add_milestone_cmd(cohort_dir, edge, code):
    """Split a time edge around a new milestone; creates a new version."""
    session = _load_session(cohort_dir)
    version = session.add_milestone(edge, code)
    with open(os.path.join(cohort_dir, SESSION_FILE), encoding="utf-8") as fh:
        state = json.load(fh)
    state["milestone_ops"].append({"edge": edge, "code": code})
    state["selection"] = None
    _save_session_state(cohort_dir, state)
    _emit({"timeline_version": version}, None)


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path())
@click.option("--fig", type=click.Path(), help="render the survival curve to an image file")
def survival(cohort_dir, out, fig):
    """Kaplan-Meier curve for time to outcome after the final anchor."""
    session = _load_session(cohort_dir)
    payload = kaplan_meier(session.cohort).to_dict()
    if fig:
        report.survival_figure(payload, fig)
    _emit(payload, out)


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(exists=True), help="directory of dataset snapshots to preload")
@click.option("--static-dir", type=click.Path(exists=True), help="frontend asset bundle to serve at /ui")
def serve(port, host, data_dir, static_dir):
    """Run the HTTP JSON service."""
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(data_dir=data_dir, static_dir=static_dir), host=host, port=port)


if __name__ == "__main__":
    main()
