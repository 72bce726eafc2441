import { densityColor, outcomeColor } from "../color";
import type { ColorScale } from "../state";
import { el, fmt, scaleLinear, svgRoot, text } from "../svg";
import type { ScatterPayload } from "../types";

export interface ScatterOptions {
  width?: number;
  height?: number;
  colorScale?: ColorScale;
  locked?: Set<string>;
  highlight?: string;
}

const MARGIN = { top: 12, right: 16, bottom: 28, left: 44 };

/** Correlation-by-prevalence scatter: grayscale hexmap of every
 * hierarchy node behind the informative-cut marks. Marks carry
 * data-code attributes; the app wires clicks to focus requests. */
export function renderScatter(payload: ScatterPayload, opts: ScatterOptions = {}): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const scale = opts.colorScale ?? "red-yellow-green";
  const locked = opts.locked ?? new Set<string>();
  const highlight = (opts.highlight ?? "").toLowerCase();

  const [x0, x1] = payload.axis_domains.x;
  const [y0, y1] = payload.axis_domains.y;
  const sx = scaleLinear(x0, x1, MARGIN.left, width - MARGIN.right);
  const sy = scaleLinear(y0, y1, height - MARGIN.bottom, MARGIN.top);

  const children: string[] = [];

  // hexmap background
  const radius = payload.hexbins.radius;
  const maxCount = Math.max(0, ...payload.hexbins.bins.map((b) => b.count));
  const rx = Math.abs(sx(radius) - sx(0));
  const ry = Math.abs(sy(radius) - sy(0));
  const hexes: string[] = [];
  for (const bin of payload.hexbins.bins) {
    // pointy-top axial coordinates back to data-space centers
    const cxData = radius * Math.sqrt(3) * (bin.q + bin.r / 2);
    const cyData = radius * 1.5 * bin.r;
    const cx = sx(cxData);
    const cy = sy(cyData);
    const pts: string[] = [];
    for (let k = 0; k < 6; k++) {
      const angle = (Math.PI / 180) * (60 * k - 30);
      pts.push(`${fmt(cx + rx * Math.cos(angle))},${fmt(cy - ry * Math.sin(angle))}`);
    }
    hexes.push(
      el("polygon", {
        points: pts.join(" "),
        fill: densityColor(bin.count, maxCount),
        "data-count": bin.count,
      })
    );
  }
  children.push(el("g", { class: "hexmap" }, hexes));

  // axes and guides
  children.push(
    el("line", {
      class: "guide-zero",
      x1: sx(0),
      x2: sx(0),
      y1: MARGIN.top,
      y2: height - MARGIN.bottom,
      stroke: "#999",
      "stroke-dasharray": "4 3",
    })
  );
  children.push(
    text(
      "text",
      { x: width / 2, y: height - 6, "text-anchor": "middle", class: "axis-label" },
      "correlation with outcome"
    )
  );
  children.push(
    text(
      "text",
      {
        x: 12,
        y: height / 2,
        "text-anchor": "middle",
        transform: `rotate(-90 12 ${height / 2})`,
        class: "axis-label",
      },
      "prevalence"
    )
  );

  // informative-cut marks
  const marks: string[] = [];
  for (const m of payload.marks) {
    const isLocked = locked.has(m.code);
    const hit =
      highlight.length > 0 &&
      (m.code.toLowerCase().includes(highlight) || m.label.toLowerCase().includes(highlight));
    marks.push(
      el("circle", {
        class: `mark${isLocked ? " locked" : ""}${hit ? " highlight" : ""}`,
        "data-code": m.code,
        cx: sx(m.x),
        cy: sy(m.y),
        r: isLocked ? 7 : 5,
        fill: outcomeColor(m.x, x0, x1, scale),
        stroke: isLocked ? "#000" : hit ? "#1f77b4" : "#555",
        "stroke-width": isLocked || hit ? 2 : 0.8,
      })
    );
  }
  children.push(el("g", { class: "marks" }, marks));

  if (payload.marks.length === 0) {
    children.push(
      text(
        "text",
        { x: width / 2, y: height / 2, "text-anchor": "middle", class: "notice" },
        "no informative event types in this context"
      )
    );
  }

  return svgRoot(width, height, children);
}
