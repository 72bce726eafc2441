"""Informative-cut traversal and the recursive scent metric."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LeafNode, UnknownCode
from .hierarchy import TypeHierarchy


@dataclass(frozen=True)
class CutParams:
    r: float = 0.0  # traversal stops where the child-comparison ratio <= r

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"R must be in [0, 1], got {self.r}")


@dataclass
class CutResult:
    pre_filter: list[str]  # the tree cut, in hierarchy traversal order
    post_filter: list[str]  # cut members with chi2 > 0
    params: CutParams
    context_id: str = ""
    pre_set: set = field(init=False)

    def __post_init__(self):
        self.pre_set = set(self.pre_filter)


def _chi2_array(stats, hierarchy):
    chi2 = getattr(stats, "chi2", None)
    if isinstance(chi2, np.ndarray) and len(chi2) == len(hierarchy):
        return chi2
    return np.asarray([stats[c].chi2 for c in hierarchy.topo_order], dtype=np.float64)


def comparison_ratio(stats, hierarchy: TypeHierarchy, code: str) -> float:
    """Fraction of children strictly more informative than the node."""
    if code not in hierarchy:
        raise UnknownCode(code)
    children = hierarchy.children[code]
    if not children:
        raise LeafNode(code)
    parent_chi2 = stats[code].chi2
    beat = sum(1 for c in children if stats[c].chi2 > parent_chi2)
    return beat / len(children)


def informative_cut(stats, hierarchy: TypeHierarchy, params: CutParams = CutParams()) -> CutResult:
    """Depth-first traversal selecting nodes where descent stops.

    A node joins the cut when it is a leaf or when the fraction of its
    children with strictly larger chi2 is <= R; otherwise the traversal
    recurses into every child. The post filter drops chi2 == 0 nodes.
    """
    chi2 = _chi2_array(stats, hierarchy)
    idx = hierarchy.index
    children = hierarchy.children
    r = params.r

    pre: list[str] = []
    stack = [hierarchy.root]
    while stack:
        code = stack.pop()
        kids = children[code]
        if not kids:
            pre.append(code)
            continue
        own = chi2[idx[code]]
        beat = 0
        for c in kids:
            if chi2[idx[c]] > own:
                beat += 1
        if beat / len(kids) <= r:
            pre.append(code)
        else:
            stack.extend(reversed(kids))
    post = [c for c in pre if chi2[idx[c]] > 0.0]
    return CutResult(
        pre_filter=pre,
        post_filter=post,
        params=params,
        context_id=getattr(stats, "context_id", ""),
    )


def scent(stats, hierarchy: TypeHierarchy) -> dict[str, float]:
    """Recursive scent: max sibling correlation spread in each subtree.

    scent(leaf) = 0; scent(j) = max(spread of children's rho,
    max of children's scents).
    """
    rho_arr = getattr(stats, "correlation", None)
    if isinstance(rho_arr, np.ndarray) and len(rho_arr) == len(hierarchy):
        rho = lambda c: float(rho_arr[hierarchy.index[c]])
    else:
        rho = lambda c: stats[c].correlation

    out: dict[str, float] = {}
    for code in reversed(hierarchy.topo_order):
        kids = hierarchy.children[code]
        if not kids:
            out[code] = 0.0
            continue
        values = [rho(c) for c in kids]
        spread = max(values) - min(values)
        out[code] = max(spread, max(out[c] for c in kids))
    return out
