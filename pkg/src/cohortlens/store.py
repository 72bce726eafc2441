"""Dataset ingestion and on-disk snapshots.

A dataset is the immutable input to querying: an event type hierarchy,
per-entity attributes, and time-ordered event sequences. Persistence is a
self-contained directory (columnar numpy files for events, JSON for
entities, CSV for the hierarchy, plus a manifest).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from datetime import date, datetime

import numpy as np

from .errors import EmptyDataset, ParseError, UnknownTypeCode
from .hierarchy import TypeHierarchy, load_hierarchy_csv
from .model import Event, EntityRecord

MANIFEST_NAME = "manifest.json"


@dataclass
class Dataset:
    """Immutable ingested dataset with columnar event views.

    ``ent_idx``/``code_idx``/``day`` are parallel arrays over all events,
    sorted by (entity, day); ``day`` is a proleptic Gregorian ordinal.
    """

    dataset_id: str
    hierarchy: TypeHierarchy
    entity_ids: list[str]
    attributes: list[dict]
    ent_idx: np.ndarray  # int32
    code_idx: np.ndarray  # int32, index into hierarchy.topo_order
    day: np.ndarray  # int32 ordinal
    _records: list[EntityRecord] = field(default=None, repr=False)

    def __post_init__(self):
        self.entity_index = {e: i for i, e in enumerate(self.entity_ids)}

    @property
    def n_entities(self) -> int:
        return len(self.entity_ids)

    @property
    def n_events(self) -> int:
        return len(self.day)

    def records(self) -> list[EntityRecord]:
        """Materialize per-entity event lists (cached)."""
        if self._records is None:
            codes = self.hierarchy.topo_order
            recs = [
                EntityRecord(id=eid, attributes=dict(attrs), events=[])
                for eid, attrs in zip(self.entity_ids, self.attributes)
            ]
            for e, c, d in zip(self.ent_idx, self.code_idx, self.day):
                eid = self.entity_ids[e]
                recs[e].events.append(
                    Event(entity_id=eid, type_code=codes[c], timestamp=date.fromordinal(int(d)))
                )
            self._records = recs
        return self._records


def _parse_date(text, row):
    try:
        # accept full timestamps, truncate to day resolution
        return datetime.fromisoformat(text).date()
    except ValueError as exc:
        raise ParseError(str(exc), row=row) from None


def _parse_attr_value(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def read_events_csv(path):
    """Yield (entity_id, type_code, date) from an events file."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader):
            if i == 0 and row and row[0] == "entity_id":
                continue
            if not row:
                continue
            if len(row) < 3:
                raise ParseError(f"expected 3 columns, got {len(row)}", row=i)
            yield row[0], row[1], _parse_date(row[2], i)


def read_attributes_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "entity_id" not in reader.fieldnames:
            raise ParseError("attributes file needs an entity_id column")
        out = {}
        for row in reader:
            eid = row.pop("entity_id")
            out[eid] = {k: _parse_attr_value(v) for k, v in row.items()}
        return out


def ingest(events_path, hierarchy_path, attributes_path=None, dataset_id="dataset") -> Dataset:
    """Parse and validate the three delimited inputs into a Dataset."""
    hierarchy = load_hierarchy_csv(hierarchy_path)
    attrs_by_id = read_attributes_csv(attributes_path) if attributes_path else {}

    ents: list[str] = []
    codes: list[int] = []
    days: list[int] = []
    entity_index: dict[str, int] = {}
    code_index = hierarchy.index
    for i, (eid, code, d) in enumerate(read_events_csv(events_path)):
        if code not in code_index:
            raise UnknownTypeCode(code, row=i)
        idx = entity_index.setdefault(eid, len(entity_index))
        ents.append(idx)
        codes.append(code_index[code])
        days.append(d.toordinal())
    if not ents:
        raise EmptyDataset(events_path)

    ent_idx = np.asarray(ents, dtype=np.int32)
    code_idx = np.asarray(codes, dtype=np.int32)
    day = np.asarray(days, dtype=np.int32)
    order = np.lexsort((day, ent_idx))
    entity_ids = sorted(entity_index, key=entity_index.get)
    return Dataset(
        dataset_id=dataset_id,
        hierarchy=hierarchy,
        entity_ids=entity_ids,
        attributes=[attrs_by_id.get(eid, {}) for eid in entity_ids],
        ent_idx=ent_idx[order],
        code_idx=code_idx[order],
        day=day[order],
    )


def save_dataset(dataset: Dataset, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    np.save(os.path.join(out_dir, "events_entity.npy"), dataset.ent_idx)
    np.save(os.path.join(out_dir, "events_code.npy"), dataset.code_idx)
    np.save(os.path.join(out_dir, "events_day.npy"), dataset.day)
    dataset.hierarchy.save_csv(os.path.join(out_dir, "hierarchy.csv"))
    with open(os.path.join(out_dir, "entities.json"), "w", encoding="utf-8") as fh:
        json.dump(
            {"entity_ids": dataset.entity_ids, "attributes": dataset.attributes},
            fh,
            sort_keys=True,
        )
    manifest = {
        "dataset_id": dataset.dataset_id,
        "n_entities": dataset.n_entities,
        "n_events": dataset.n_events,
        "n_event_types": len(dataset.hierarchy),
        "files": {
            "events_entity": "events_entity.npy",
            "events_code": "events_code.npy",
            "events_day": "events_day.npy",
            "hierarchy": "hierarchy.csv",
            "entities": "entities.json",
        },
    }
    with open(os.path.join(out_dir, MANIFEST_NAME), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)


def load_dataset(path) -> Dataset:
    with open(os.path.join(path, MANIFEST_NAME), encoding="utf-8") as fh:
        manifest = json.load(fh)
    files = manifest["files"]
    with open(os.path.join(path, files["entities"]), encoding="utf-8") as fh:
        ents = json.load(fh)
    return Dataset(
        dataset_id=manifest["dataset_id"],
        hierarchy=load_hierarchy_csv(os.path.join(path, files["hierarchy"])),
        entity_ids=ents["entity_ids"],
        attributes=ents["attributes"],
        ent_idx=np.load(os.path.join(path, files["events_entity"])),
        code_idx=np.load(os.path.join(path, files["events_code"])),
        day=np.load(os.path.join(path, files["events_day"])),
    )


def dataset_from_records(dataset_id, hierarchy, records: list[tuple]) -> Dataset:
    """Build a Dataset in memory from (entity_id, type_code, date) tuples.

    Entities keep first-appearance order; attributes may be attached via
    a dict keyed by entity id in the optional 4th element of each tuple.
    """
    entity_index: dict[str, int] = {}
    ents, codes, days = [], [], []
    attrs: dict[str, dict] = {}
    for rec in records:
        eid, code, d = rec[0], rec[1], rec[2]
        idx = entity_index.setdefault(eid, len(entity_index))
        ents.append(idx)
        codes.append(hierarchy.index[code])
        days.append(d.toordinal())
        if len(rec) > 3 and rec[3]:
            attrs.setdefault(eid, {}).update(rec[3])
    if not ents:
        raise EmptyDataset(dataset_id)
    ent_idx = np.asarray(ents, dtype=np.int32)
    code_idx = np.asarray(codes, dtype=np.int32)
    day = np.asarray(days, dtype=np.int32)
    order = np.lexsort((day, ent_idx))
    entity_ids = sorted(entity_index, key=entity_index.get)
    return Dataset(
        dataset_id=dataset_id,
        hierarchy=hierarchy,
        entity_ids=entity_ids,
        attributes=[attrs.get(eid, {}) for eid in entity_ids],
        ent_idx=ent_idx[order],
        code_idx=code_idx[order],
        day=day[order],
    )
