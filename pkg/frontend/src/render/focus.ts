import { outcomeColor } from "../color";
import type { ColorScale } from "../state";
import { el, fmt, scaleLinear, svgRoot, text } from "../svg";
import type { FocusPayload } from "../types";

export interface FocusOptions {
  width?: number;
  height?: number;
  colorScale?: ColorScale;
  locked?: Set<string>;
}

const MARGIN = { top: 16, right: 16, bottom: 28, left: 44 };
const ANCESTOR_BAND = 26; // vertical px per ancestor level
const SCENT_MIN = 2; // triangle width range in display units
const SCENT_MAX = 14;

/** Scent triangle beneath a mark; width scales linearly with the scent
 * value relative to the payload maximum. Leaves get a flat tick. */
function scentGlyph(cx: number, cy: number, scent: number, maxScent: number, leaf: boolean): string {
  if (leaf) {
    return el("line", {
      class: "scent-leaf",
      x1: cx - 3,
      x2: cx + 3,
      y1: cy,
      y2: cy,
      stroke: "#888",
    });
  }
  const w = maxScent > 0 ? SCENT_MIN + (scent / maxScent) * (SCENT_MAX - SCENT_MIN) : SCENT_MIN;
  const h = 6;
  return el("polygon", {
    class: "scent",
    points: `${fmt(cx - w / 2)},${fmt(cy + h)} ${fmt(cx + w / 2)},${fmt(cy + h)} ${fmt(cx)},${fmt(cy)}`,
    fill: "#777",
    "data-scent": scent,
  });
}

/** Focused dual view: the ancestor path across the top (connected by
 * arcs back toward the root) and the focus type's children on an
 * optimized prevalence axis capped at the focus prevalence. */
export function renderFocus(payload: FocusPayload, opts: FocusOptions = {}): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const scale = opts.colorScale ?? "red-yellow-green";
  const locked = opts.locked ?? new Set<string>();

  const [x0, x1] = payload.x_domain;
  const sx = scaleLinear(x0, x1, MARGIN.left, width - MARGIN.right);

  const nAncestors = payload.ancestors.length;
  const bandBottom = MARGIN.top + (nAncestors + 1) * ANCESTOR_BAND;
  const yMax = payload.y_max > 0 ? payload.y_max : 1;
  const sy = scaleLinear(0, yMax, height - MARGIN.bottom, bandBottom + 12);

  const children: string[] = [];
  const maxScent = Math.max(0, ...Object.values(payload.scents));

  // guide lines: zero correlation and the focus correlation
  for (const [name, gx] of [
    ["zero", payload.guides.zero],
    ["focus", payload.guides.focus],
  ] as const) {
    children.push(
      el("line", {
        class: `guide-${name}`,
        x1: sx(gx),
        x2: sx(gx),
        y1: MARGIN.top,
        y2: height - MARGIN.bottom,
        stroke: name === "zero" ? "#999" : "#bbb",
        "stroke-dasharray": "4 3",
      })
    );
  }

  // ancestor path, root at the top, arcs tracing the path downward
  const pathNodes = payload.ancestors.map((a, i) => ({
    code: a.code,
    x: sx(a.x),
    y: MARGIN.top + i * ANCESTOR_BAND,
  }));
  const focusPos = {
    code: payload.focus,
    x: sx(payload.focus_stats.correlation),
    y: MARGIN.top + nAncestors * ANCESTOR_BAND,
  };
  const chain = [...pathNodes, focusPos];
  const arcs: string[] = [];
  for (let i = 0; i + 1 < chain.length; i++) {
    const a = chain[i];
    const b = chain[i + 1];
    const midX = (a.x + b.x) / 2;
    arcs.push(
      el("path", {
        class: "ancestor-arc",
        d: `M ${fmt(a.x)} ${fmt(a.y)} Q ${fmt(midX)} ${fmt((a.y + b.y) / 2 - 8)} ${fmt(b.x)} ${fmt(b.y)}`,
        fill: "none",
        stroke: "#aaa",
      })
    );
  }
  children.push(el("g", { class: "ancestor-arcs" }, arcs));

  const ancestorMarks: string[] = [];
  for (const node of pathNodes) {
    ancestorMarks.push(
      el("circle", {
        class: "ancestor",
        "data-code": node.code,
        cx: node.x,
        cy: node.y,
        r: 5,
        fill: "#fff",
        stroke: "#555",
      })
    );
    ancestorMarks.push(
      text("text", { x: node.x + 9, y: node.y + 4, class: "ancestor-label" }, node.code)
    );
  }
  children.push(el("g", { class: "ancestors" }, ancestorMarks));

  // focus mark with its scent glyph
  children.push(
    el("circle", {
      class: "focus-mark",
      "data-code": payload.focus,
      cx: focusPos.x,
      cy: focusPos.y,
      r: 7,
      fill: outcomeColor(payload.focus_stats.correlation, x0, x1, scale),
      stroke: "#000",
    })
  );
  children.push(
    scentGlyph(
      focusPos.x,
      focusPos.y + 9,
      payload.scents[payload.focus] ?? 0,
      maxScent,
      payload.focus_stats.is_leaf
    )
  );

  // children on the optimized prevalence axis
  const childMarks: string[] = [];
  for (const c of payload.children) {
    const cx = sx(c.x);
    const cy = sy(c.y);
    const r = Math.max(3, (Math.abs(sy(c.d) - sy(0)) || 6) / 2);
    childMarks.push(
      el("circle", {
        class: `child${locked.has(c.code) ? " locked" : ""}`,
        "data-code": c.code,
        cx,
        cy,
        r,
        fill: outcomeColor(c.x, x0, x1, scale),
        stroke: locked.has(c.code) ? "#000" : "#555",
        "stroke-width": locked.has(c.code) ? 2 : 0.8,
      })
    );
    const scent = payload.scents[c.code];
    childMarks.push(scentGlyph(cx, cy + r + 2, scent ?? 0, maxScent, scent === undefined || scent === 0));
  }
  children.push(el("g", { class: "children" }, childMarks));

  if (payload.children.length === 0) {
    children.push(
      text(
        "text",
        { x: width / 2, y: (bandBottom + height) / 2, "text-anchor": "middle", class: "notice" },
        `${payload.focus} has no subtypes`
      )
    );
  }

  children.push(
    text(
      "text",
      { x: width / 2, y: height - 6, "text-anchor": "middle", class: "axis-label" },
      "correlation with outcome"
    )
  );
  return svgRoot(width, height, children);
}
