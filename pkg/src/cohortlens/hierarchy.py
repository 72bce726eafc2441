"""Event type hierarchy: a rooted tree of codes with navigation helpers."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import (
    CycleDetected,
    DuplicateCode,
    EmptyInput,
    MissingParent,
    MultipleRoots,
    UnknownCode,
)


@dataclass(frozen=True)
class EventType:
    code: str
    label: str
    parent: Optional[str]  # None for the root
    depth: int


@dataclass
class TypeHierarchy:
    """Immutable rooted tree over event type codes.

    Children lists are kept sorted by code so every traversal is
    deterministic. ``topo_order`` lists codes parent-before-child.
    """

    nodes: dict[str, EventType]
    root: str
    children: dict[str, list[str]]
    topo_order: list[str] = field(default_factory=list)
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.topo_order:
            order = []
            stack = [self.root]
            while stack:
                code = stack.pop()
                order.append(code)
                # reversed keeps sorted-by-code order in the output
                stack.extend(reversed(self.children[code]))
            self.topo_order = order
            self.index = {c: i for i, c in enumerate(order)}

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, code):
        return code in self.nodes

    def _require(self, code):
        if code not in self.nodes:
            raise UnknownCode(code)

    def is_leaf(self, code) -> bool:
        self._require(code)
        return not self.children[code]

    @property
    def leaves(self) -> list[str]:
        return [c for c in self.topo_order if not self.children[c]]

    def subtree(self, code) -> set[str]:
        """All codes at or below ``code`` (includes ``code`` itself)."""
        self._require(code)
        out = set()
        stack = [code]
        while stack:
            c = stack.pop()
            out.add(c)
            stack.extend(self.children[c])
        return out

    def ancestors(self, code) -> list[str]:
        """Path from the root down to (excluding) ``code``."""
        self._require(code)
        path = []
        cur = self.nodes[code].parent
        while cur is not None:
            path.append(cur)
            cur = self.nodes[cur].parent
        path.reverse()
        return path

    def to_edges(self) -> list[tuple[str, str, str]]:
        """Serialize as (code, parent, label) rows; root has parent ''."""
        return [
            (c, self.nodes[c].parent or "", self.nodes[c].label)
            for c in self.topo_order
        ]

    def save_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["code", "parent", "label"])
            w.writerows(self.to_edges())


def build_hierarchy(edges: Iterable[tuple]) -> TypeHierarchy:
    """Build a hierarchy from (code, parent[, label]) rows.

    Exactly one row must have an empty parent (that row is the root).
    """
    parents: dict[str, Optional[str]] = {}
    labels: dict[str, str] = {}
    roots = []
    for row in edges:
        code, parent = row[0], row[1]
        label = row[2] if len(row) > 2 else code
        if code in parents:
            raise DuplicateCode(code)
        parent = parent or None
        parents[code] = parent
        labels[code] = label
        if parent is None:
            roots.append(code)
    if not parents:
        raise EmptyInput("no edges")
    if len(roots) == 0:
        raise MultipleRoots("no root edge (empty parent) found")
    if len(roots) > 1:
        raise MultipleRoots(f"multiple roots: {sorted(roots)}")
    root = roots[0]

    for code, parent in parents.items():
        if parent is not None and parent not in parents:
            raise MissingParent(f"{code} -> {parent}")

    # depth assignment doubles as the cycle check
    depth: dict[str, int] = {}
    for code in parents:
        if code in depth:
            continue
        trail: list[str] = []
        seen: set[str] = set()
        cur: Optional[str] = code
        while cur is not None and cur not in depth:
            if cur in seen:
                raise CycleDetected(cur)
            seen.add(cur)
            trail.append(cur)
            cur = parents[cur]
        d = depth[cur] if cur is not None else -1
        for c in reversed(trail):
            d += 1
            depth[c] = d

    nodes = {
        code: EventType(code=code, label=labels[code], parent=parents[code], depth=depth[code])
        for code in parents
    }
    children: dict[str, list[str]] = {code: [] for code in parents}
    for code, parent in parents.items():
        if parent is not None:
            children[parent].append(code)
    for lst in children.values():
        lst.sort()
    return TypeHierarchy(nodes=nodes, root=root, children=children)


ROOT_CODE = "ROOT"


def derive_prefix_hierarchy(codes: Iterable[str]) -> TypeHierarchy:
    """Infer a hierarchy from dotted/prefix-style codes (ICD-10 style).

    For every code with a dotted suffix, the dot-truncated intermediates
    and the stem are inserted (I50.41 adds I50.4 and I50). Each node's
    parent is its longest strict prefix among the inserted nodes; codes
    with no such prefix hang off a synthetic ROOT.
    """
    codes = [c for c in codes if c]
    if not codes:
        raise EmptyInput("no codes")
    universe = set(codes)
    for code in codes:
        if "." in code:
            stem, suffix = code.split(".", 1)
            universe.add(stem)
            for k in range(1, len(suffix)):
                universe.add(f"{stem}.{suffix[:k]}")
    edges = [(ROOT_CODE, "", ROOT_CODE)]
    for code in sorted(universe):
        if code == ROOT_CODE:
            continue
        prefixes = [p for p in universe if p != code and code.startswith(p)]
        parent = max(prefixes, key=len) if prefixes else ROOT_CODE
        edges.append((code, parent, code))
    return build_hierarchy(edges)


def load_hierarchy_csv(path) -> TypeHierarchy:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if rows and rows[0][:2] == ["code", "parent"]:
        rows = rows[1:]
    return build_hierarchy(rows)
