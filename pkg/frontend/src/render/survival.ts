import { el, fmt, scaleLinear, svgRoot, text } from "../svg";
import type { SurvivalPayload } from "../types";

export interface SurvivalOptions {
  width?: number;
  height?: number;
}

const MARGIN = { top: 12, right: 12, bottom: 28, left: 40 };

/** Step-function survival curve starting at S(0)=1, with tick marks at
 * censoring times. */
export function renderSurvival(payload: SurvivalPayload, opts: SurvivalOptions = {}): string {
  const width = opts.width ?? 420;
  const height = opts.height ?? 260;

  const tMax = Math.max(
    1,
    ...payload.points.map((p) => p.t),
    ...payload.censor_times
  );
  const sx = scaleLinear(0, tMax, MARGIN.left, width - MARGIN.right);
  const sy = scaleLinear(0, 1, height - MARGIN.bottom, MARGIN.top);

  const children: string[] = [];

  // axes
  children.push(
    el("line", {
      x1: MARGIN.left,
      x2: width - MARGIN.right,
      y1: sy(0),
      y2: sy(0),
      stroke: "#333",
    })
  );
  children.push(
    el("line", { x1: sx(0), x2: sx(0), y1: sy(0), y2: sy(1), stroke: "#333" })
  );

  // step path: horizontal to each event time, then vertical drop
  const pts = payload.points;
  let d = `M ${fmt(sx(0))} ${fmt(sy(1))}`;
  for (const p of pts) {
    if (p.t === 0) continue;
    d += ` H ${fmt(sx(p.t))} V ${fmt(sy(p.s))}`;
  }
  d += ` H ${fmt(sx(tMax))}`;
  children.push(
    el("path", { class: "survival", d, fill: "none", stroke: "#1f77b4", "stroke-width": 1.5 })
  );

  // censoring ticks on the current step level
  const stepAt = (t: number): number => {
    let s = 1;
    for (const p of pts) {
      if (p.t <= t) s = p.s;
      else break;
    }
    return s;
  };
  const ticks: string[] = [];
  for (const t of payload.censor_times) {
    const y = sy(stepAt(t));
    ticks.push(
      el("line", {
        class: "censor",
        x1: sx(t),
        x2: sx(t),
        y1: y - 4,
        y2: y + 4,
        stroke: "#1f77b4",
      })
    );
  }
  children.push(el("g", { class: "censors" }, ticks));

  children.push(
    text("text", { x: width / 2, y: height - 6, "text-anchor": "middle", class: "axis-label" },
      "days since final anchor")
  );
  children.push(text("text", { x: MARGIN.left - 28, y: sy(1) + 4, class: "tick" }, "1"));
  children.push(text("text", { x: MARGIN.left - 28, y: sy(0) + 4, class: "tick" }, "0"));
  return svgRoot(width, height, children);
}
