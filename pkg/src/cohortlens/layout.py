"""Constrained y-position optimizer for the focused scatter, plus hexbin.

The cost balances pairwise mark overlap against vertical distortion,
subject to hard bounds and preservation of the initial vertical order.
The double sum runs over all ordered pairs including self-pairs, so a
layout of n marks carries a constant alpha * n * d floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidAlpha, OutOfBoundsInitial, UnknownCode

DEFAULT_ALPHA = 0.8


def overlap(x1, y1, x2, y2, d) -> float:
    """Pairwise overlap: max(0, d - Euclidean distance)."""
    return max(0.0, d - math.hypot(x1 - x2, y1 - y2))


def layout_cost(x, y_new, y0, d, alpha=DEFAULT_ALPHA) -> float:
    """Full cost: alpha * sum over all ordered pairs (incl. self) of
    overlap + (1 - alpha) * total |y' - y0|."""
    x = np.asarray(x, dtype=float)
    y_new = np.asarray(y_new, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    dx = x[:, None] - x[None, :]
    dy = y_new[:, None] - y_new[None, :]
    om = np.maximum(0.0, d - np.sqrt(dx * dx + dy * dy))
    return float(alpha * om.sum() + (1 - alpha) * np.abs(y_new - y0).sum())


def _coordinate_objective(y, y_near, dx_near, y0i, d, alpha):
    """Cost terms that vary with y'_i (pairs with i counted twice).

    Only marks with |x_i - x_j| < d can overlap; everything else (and
    the constant self-pair) drops out of the line search. ``y`` may be a
    scalar or an array of candidate positions.
    """
    y = np.asarray(y, dtype=float)
    dy = y[..., None] - y_near
    dist = np.sqrt(dx_near * dx_near + dy * dy)
    om = np.maximum(0.0, d - dist)
    return 2.0 * alpha * om.sum(axis=-1) + (1 - alpha) * np.abs(y - y0i)


def optimize_y(x, y0, d, alpha=DEFAULT_ALPHA, y_min=None, y_max=None,
               codes=None, tol=1e-6, max_iter=10_000):
    """Minimize the layout cost over y positions.

    Cyclic coordinate descent with a near-exact 1-D search per mark
    (candidate breakpoints of the piecewise objective plus bounded Brent
    refinement), constrained so every iterate stays inside the bounds and
    preserves the initial vertical order. Ties in y0 are ordered by code
    for determinism. Returns (y_opt, final_cost).
    """
    x = np.asarray(x, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    n = len(y0)
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(alpha)
    if d <= 0:
        raise InvalidAlpha(f"mark diameter must be positive, got {d}")
    if y_min is None:
        y_min = float(y0.min()) if n else 0.0
    if y_max is None:
        y_max = float(y0.max()) if n else 1.0
    if n and (y0.min() < y_min - 1e-12 or y0.max() > y_max + 1e-12):
        raise OutOfBoundsInitial((float(y0.min()), float(y0.max()), y_min, y_max))
    if n == 0:
        return np.empty(0), 0.0

    keys = codes if codes is not None else list(range(n))
    order = sorted(range(n), key=lambda i: (y0[i], keys[i]))
    rank = np.empty(n, dtype=int)
    for r, i in enumerate(order):
        rank[i] = r

    # only pairs closer than d in x can ever overlap
    near = []
    for i in range(n):
        mask = np.abs(x - x[i]) < d
        mask[i] = False
        near.append(np.nonzero(mask)[0])

    # coordinate descent is prone to local minima on small crowded
    # instances, so seed it from a few rank-preserving configurations
    starts = [y0.astype(float).copy()]
    if 1 < n <= 50:
        starts.append(y_min + rank * (y_max - y_min) / (n - 1))
        rng = np.random.default_rng(0)
        for scale in (0.25, 0.5):
            jit = np.clip(y0 + rng.uniform(-scale, scale, n) * (y_max - y_min), y_min, y_max)
            starts.append(np.sort(jit)[rank])

    initial_cost = layout_cost(x, y0, y0, d, alpha)
    best_y, best_cost = y0.astype(float).copy(), initial_cost
    for start in starts:
        y = _descend(x, start, y0, d, alpha, y_min, y_max, order, near, tol, max_iter)
        _strictify(y, y0, order, y_min, y_max)
        final = layout_cost(x, y, y0, d, alpha)
        if final < best_cost:
            best_y, best_cost = y, final
    return best_y, best_cost


def _descend(x, y_init, y0, d, alpha, y_min, y_max, order, near, tol, max_iter):
    """Cyclic coordinate descent from one starting configuration."""
    n = len(y0)
    y = np.asarray(y_init, dtype=float).copy()
    for _ in range(max_iter):
        improved = 0.0
        for r in range(n):
            i = order[r]
            lo = y[order[r - 1]] if r > 0 else y_min
            hi = y[order[r + 1]] if r < n - 1 else y_max
            lo = max(lo, y_min)
            hi = min(hi, y_max)
            if hi < lo:
                continue
            y_near = y[near[i]]
            dx_near = np.abs(x[near[i]] - x[i])
            cur = float(_coordinate_objective(y[i], y_near, dx_near, y0[i], d, alpha))
            if cur == 0.0:
                continue  # no overlap, no distortion: already optimal
            best_y, best_f = _line_search(y_near, dx_near, y0[i], d, alpha, lo, hi)
            if best_f < cur - 1e-15:
                y[i] = best_y
                improved += cur - best_f
        if improved < tol:
            break
    return y


def _line_search(y_near, dx_near, y0i, d, alpha, lo, hi):
    """Near-exact minimization of the coordinate objective on [lo, hi].

    Evaluates the breakpoints of the piecewise objective (overlap
    activation edges and the distortion kink) plus a uniform sample, then
    zooms on the best point. All evaluations are vectorized.
    """
    cands = [lo, hi, min(max(y0i, lo), hi)]
    if len(y_near):
        s = np.sqrt(np.maximum(d * d - dx_near * dx_near, 0.0))
        bp = np.concatenate([y_near, y_near - s, y_near + s, y_near - d, y_near + d])
        bp = bp[(bp >= lo) & (bp <= hi)]
        cands = np.concatenate([np.asarray(cands), bp, np.linspace(lo, hi, 17)])
    else:
        cands = np.asarray(cands)
    vals = _coordinate_objective(cands, y_near, dx_near, y0i, d, alpha)
    k = int(np.argmin(vals))
    best_y, best_f = float(cands[k]), float(vals[k])
    # zoom on smooth-piece interior minima
    span = (hi - lo) / 16.0
    for _ in range(3):
        if span < 1e-13:
            break
        grid = np.linspace(max(best_y - span, lo), min(best_y + span, hi), 25)
        g = _coordinate_objective(grid, y_near, dx_near, y0i, d, alpha)
        j = int(np.argmin(g))
        if g[j] < best_f:
            best_y, best_f = float(grid[j]), float(g[j])
        span /= 12.0
    return best_y, best_f


def _strictify(y, y0, order, y_min, y_max):
    """Restore strict order where the initial order was strict.

    Coordinate updates keep the sequence weakly sorted; marks whose y0
    differed must not end up exactly equal. Forward pass separates going
    up, backward pass pulls the chain back under the upper bound without
    reordering ties.
    """
    n = len(order)
    if n < 2:
        return
    eps = max(1e-12, (y_max - y_min) * 1e-12)
    gaps = [0.0] * n
    for r in range(1, n):
        if y0[order[r]] > y0[order[r - 1]]:
            gaps[r] = eps
    for r in range(1, n):
        lo = y[order[r - 1]] + gaps[r]
        if y[order[r]] < lo:
            y[order[r]] = lo
    if y[order[-1]] > y_max:
        y[order[-1]] = y_max
    for r in range(n - 2, -1, -1):
        hi = y[order[r + 1]] - gaps[r + 1]
        if y[order[r]] > hi:
            y[order[r]] = hi


@dataclass
class Mark:
    code: str
    x: float  # correlation-scale position, fixed
    y0: float  # initial y from the prevalence scale
    y_opt: float
    diameter: float


@dataclass
class AncestorMark:
    code: str
    x: float  # rho on the shared x scale
    depth: int


@dataclass
class FocusLayout:
    focus: str
    ancestors: list[AncestorMark]
    children: list[Mark]
    x_domain: tuple  # centered on the focus correlation
    y_max: float  # focus prevalence caps the child axis
    guides: dict  # zero-correlation and focus-correlation guide positions
    cost: float = 0.0
    scents: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "focus": self.focus,
            "ancestors": [
                {"code": a.code, "x": a.x, "depth": a.depth} for a in self.ancestors
            ],
            "children": [
                {"code": m.code, "x": m.x, "y0": m.y0, "y": m.y_opt, "d": m.diameter}
                for m in self.children
            ],
            "x_domain": list(self.x_domain),
            "y_max": self.y_max,
            "guides": self.guides,
            "cost": self.cost,
            "scents": self.scents,
        }


def focus_layout(stats, hierarchy, focus_code, mark_diameter=None,
                 alpha=DEFAULT_ALPHA, scents=None) -> FocusLayout:
    """Dual-view layout: ancestor path by depth, children on an optimized
    prevalence scale capped at the focus prevalence."""
    if focus_code not in hierarchy:
        raise UnknownCode(focus_code)
    focus = stats[focus_code]
    ancestors = [
        AncestorMark(code=a, x=stats[a].correlation, depth=hierarchy.nodes[a].depth)
        for a in hierarchy.ancestors(focus_code)
    ]
    child_codes = hierarchy.children[focus_code]
    y_cap = focus.prevalence if focus.prevalence > 0 else 1.0
    d = mark_diameter if mark_diameter is not None else y_cap / 25.0

    marks: list[Mark] = []
    if child_codes:
        xs = np.asarray([stats[c].correlation for c in child_codes], dtype=float)
        ys = np.asarray([stats[c].prevalence for c in child_codes], dtype=float)
        # roll-up monotonicity guarantees ys <= y_cap
        y_opt, cost = optimize_y(xs, ys, d=d, alpha=alpha, y_min=0.0, y_max=y_cap,
                                 codes=child_codes)
        marks = [
            Mark(code=c, x=float(xs[k]), y0=float(ys[k]), y_opt=float(y_opt[k]), diameter=d)
            for k, c in enumerate(child_codes)
        ]
    else:
        cost = 0.0

    rho_f = focus.correlation
    half = max(
        [abs(stats[c].correlation - rho_f) for c in child_codes]
        + [abs(a.x - rho_f) for a in ancestors]
        + [abs(rho_f), 0.05]
    ) * 1.1
    scents = scents or {}
    wanted = [focus_code] + [a.code for a in ancestors] + list(child_codes)
    return FocusLayout(
        focus=focus_code,
        ancestors=ancestors,
        children=marks,
        x_domain=(rho_f - half, rho_f + half),
        y_max=y_cap,
        guides={"zero": 0.0, "focus": rho_f},
        cost=cost,
        scents={c: scents[c] for c in wanted if c in scents},
    )


@dataclass
class HexBinGrid:
    radius: float
    bins: dict  # (q, r) axial coordinate -> count

    def to_dict(self):
        return {
            "radius": self.radius,
            "bins": [{"q": q, "r": r, "count": c} for (q, r), c in sorted(self.bins.items())],
        }


def hexbin(points, radius) -> HexBinGrid:
    """Pointy-top axial hex binning; every point lands in exactly one bin."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    bins: dict[tuple, int] = {}
    sqrt3 = math.sqrt(3.0)
    for px, py in points:
        q = (sqrt3 / 3.0 * px - py / 3.0) / radius
        r = (2.0 / 3.0 * py) / radius
        key = _axial_round(q, r)
        bins[key] = bins.get(key, 0) + 1
    return HexBinGrid(radius=radius, bins=bins)


def _axial_round(q, r):
    """Cube-coordinate rounding; exact ties go to the smaller axial coord."""
    s = -q - r
    rq, rr, rs = round(q), round(r), round(s)
    dq, dr, ds = abs(rq - q), abs(rr - r), abs(rs - s)
    if dq > dr and dq > ds:
        rq = -rr - rs
    elif dr > ds:
        rr = -rq - rs
    return int(rq), int(rr)
