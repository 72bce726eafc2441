"""Static figure rendering for the CLI report path."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Polygon

SQRT3 = math.sqrt(3.0)


def _hex_centers(bins, radius):
    for b in bins:
        q, r = b["q"], b["r"]
        x = radius * (SQRT3 * q + SQRT3 / 2.0 * r)
        y = radius * 1.5 * r
        yield x, y, b["count"]


def scatter_figure(payload, path):
    """Cut marks over the grayscale hexmap of all hierarchy nodes."""
    fig, ax = plt.subplots(figsize=(7, 5))
    hexes = payload["hexbins"]
    radius = hexes["radius"]
    counts = [b["count"] for b in hexes["bins"]] or [1]
    vmax = math.log1p(max(counts))
    for x, y, c in _hex_centers(hexes["bins"], radius):
        shade = 1.0 - 0.85 * (math.log1p(c) / vmax if vmax else 0.0)
        angles = np.deg2rad(np.arange(30, 390, 60))
        verts = np.column_stack([x + radius * np.sin(angles), y + radius * np.cos(angles)])
        ax.add_patch(Polygon(verts, closed=True, facecolor=str(shade), edgecolor="none", zorder=1))
    if payload["marks"]:
        xs = [m["x"] for m in payload["marks"]]
        ys = [m["y"] for m in payload["marks"]]
        cs = [m["x"] for m in payload["marks"]]
        sc = ax.scatter(xs, ys, c=cs, cmap="RdYlGn_r", vmin=-1, vmax=1,
                        s=36, edgecolor="black", linewidth=0.4, zorder=2)
        fig.colorbar(sc, ax=ax, label="correlation with outcome")
    ax.set_xlim(payload["axis_domains"]["x"])
    ax.set_ylim(payload["axis_domains"]["y"])
    ax.set_xlabel("correlation with outcome")
    ax.set_ylabel("fraction of entities with event")
    ax.set_title(f"informative cut (R={payload['r']}, {len(payload['marks'])} marks)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def focus_figure(payload, path):
    """Ancestor path above the optimized child scatter."""
    fig, (ax_top, ax_bot) = plt.subplots(
        2, 1, figsize=(7, 6), sharex=True, height_ratios=[1, 2]
    )
    anc = payload["ancestors"]
    focus_x = payload["guides"]["focus"]
    xs = [a["x"] for a in anc] + [focus_x]
    depths = [a["depth"] for a in anc] + [len(anc)]
    ax_top.plot(xs, depths, "-o", color="tab:blue")
    for a in anc:
        ax_top.annotate(a["code"], (a["x"], a["depth"]), fontsize=8,
                        textcoords="offset points", xytext=(4, 4))
    ax_top.plot([focus_x], [len(anc)], "o", color="tab:red", markersize=10)
    ax_top.annotate(payload["focus"], (focus_x, len(anc)), fontsize=9,
                    textcoords="offset points", xytext=(4, 4))
    ax_top.invert_yaxis()
    ax_top.set_ylabel("hierarchy depth")

    for guide, style in (("zero", ":"), ("focus", "--")):
        for ax in (ax_top, ax_bot):
            ax.axvline(payload["guides"][guide], color="gray", linestyle=style, linewidth=0.8)
    kids = payload["children"]
    if kids:
        ax_bot.scatter([m["x"] for m in kids], [m["y"] for m in kids],
                       c=[m["x"] for m in kids], cmap="RdYlGn_r", vmin=-1, vmax=1,
                       s=40, edgecolor="black", linewidth=0.4)
        for m in kids:
            ax_bot.annotate(m["code"], (m["x"], m["y"]), fontsize=7,
                            textcoords="offset points", xytext=(3, 3))
    ax_bot.set_xlim(payload["x_domain"])
    ax_bot.set_ylim(0, payload["y_max"])
    ax_bot.set_xlabel("correlation with outcome")
    ax_bot.set_ylabel("fraction of entities")
    fig.suptitle(f"focus: {payload['focus']}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def timeline_figure(timeline, path):
    """Milestone bars linked by time edges, colored by average outcome."""
    fig, ax = plt.subplots(figsize=(8, 4))
    cmap = plt.get_cmap("RdYlGn_r")
    # x positions: average anchor offsets per milestone, via edge avg_days
    order = [m["id"] for m in timeline["milestones"]]
    xpos = {mid: i * 10.0 for i, mid in enumerate(order)}
    for e in timeline["edges"]:
        x0, x1 = xpos[e["from"]], xpos[e["to"]]
        h = e["proportion"]
        ax.fill_between([x0 + 0.6, x1 - 0.6], 0, [h, h],
                        color=cmap(e["avg_outcome"]), alpha=0.5)
        ax.annotate(f"{e['count']} ({e['avg_days']:.0f}d)",
                    ((x0 + x1) / 2, h + 0.02), ha="center", fontsize=7)
    for m in timeline["milestones"]:
        x = xpos[m["id"]]
        ax.bar(x, m["proportion"], width=1.2, color=cmap(m["avg_outcome"]),
               edgecolor="black", linewidth=0.5)
        ax.annotate(m["label"] or m["id"], (x, m["proportion"] + 0.04),
                    ha="center", fontsize=8, rotation=20)
    ax.set_ylim(0, 1.15)
    ax.set_xticks([])
    ax.set_ylabel("fraction of cohort")
    ax.set_title(f"timeline v{timeline['version']} (N={timeline['n']})")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def survival_figure(curve, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ts = [p["t"] for p in curve["points"]]
    ss = [p["s"] for p in curve["points"]]
    ax.step(ts, ss, where="post", color="tab:blue")
    for t in curve["censor_times"]:
        # censoring tick at the current curve level
        s = next((ss[i] for i in range(len(ts) - 1, -1, -1) if ts[i] <= t), 1.0)
        ax.plot([t], [s], "|", color="tab:blue", markersize=8)
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("days since final inclusion anchor")
    ax.set_ylabel("outcome-free fraction")
    ax.set_title("Kaplan-Meier")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
