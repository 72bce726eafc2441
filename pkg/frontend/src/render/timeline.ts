import { outcomeColor } from "../color";
import type { ColorScale } from "../state";
import { el, fmt, svgRoot, text } from "../svg";
import type { TimelinePayload } from "../types";

export interface TimelineOptions {
  width?: number;
  height?: number;
  colorScale?: ColorScale;
  selected?: string | null; // "milestone:m0" or "edge:e1"
}

const MARGIN = { top: 24, right: 24, bottom: 24, left: 24 };
const BAR_WIDTH = 14;

/** Milestone-flow view: vertical bars per milestone (height = member
 * proportion) joined by edge bands whose horizontal extent encodes the
 * average time between anchors and whose color encodes the average
 * outcome. Elements carry data-kind/data-id for selection clicks. */
export function renderTimeline(payload: TimelinePayload, opts: TimelineOptions = {}): string {
  const width = opts.width ?? 860;
  const height = opts.height ?? 220;
  const scale = opts.colorScale ?? "red-yellow-green";
  const selected = opts.selected ?? null;

  // horizontal positions: milestones ordered as they appear along the
  // longest path, spaced by cumulative average edge duration
  const order: string[] = [];
  for (const p of payload.paths) {
    for (const mid of p.milestones) {
      if (!order.includes(mid)) order.push(mid);
    }
  }
  const avgDays = new Map(payload.edges.map((e) => [e.id, e.avg_days]));
  const offsets = new Map<string, number>();
  let cursor = 0;
  offsets.set(order[0], 0);
  for (const p of payload.paths) {
    for (let i = 0; i + 1 < p.milestones.length; i++) {
      const from = p.milestones[i];
      const to = p.milestones[i + 1];
      const days = avgDays.get(p.edges[i]) ?? 1;
      const candidate = (offsets.get(from) ?? 0) + Math.max(days, 1);
      if (!offsets.has(to) || candidate > (offsets.get(to) as number)) {
        offsets.set(to, candidate);
      }
      cursor = Math.max(cursor, offsets.get(to) as number);
    }
  }
  const span = Math.max(cursor, 1);
  const px = (mid: string) =>
    MARGIN.left + ((offsets.get(mid) ?? 0) / span) * (width - MARGIN.left - MARGIN.right - BAR_WIDTH);

  const maxBar = height - MARGIN.top - MARGIN.bottom;
  const children: string[] = [];

  // edge bands under the bars
  const bands: string[] = [];
  for (const e of payload.edges) {
    const x1 = px(e.from) + BAR_WIDTH;
    const x2 = px(e.to);
    const h = Math.max(3, e.proportion * maxBar * 0.8);
    const yMid = MARGIN.top + maxBar / 2;
    const isSel = selected === `edge:${e.id}`;
    bands.push(
      el("rect", {
        class: `edge${isSel ? " selected" : ""}`,
        "data-kind": "edge",
        "data-id": e.id,
        x: x1,
        y: yMid - h / 2,
        width: Math.max(x2 - x1, 2),
        height: h,
        fill: outcomeColor(e.avg_outcome, 0, 1, scale),
        opacity: 0.75,
        stroke: isSel ? "#000" : "none",
        "stroke-width": isSel ? 2 : 0,
      })
    );
    bands.push(
      text(
        "text",
        { x: (x1 + x2) / 2, y: yMid - h / 2 - 4, "text-anchor": "middle", class: "edge-label" },
        `${e.count} · ${fmt(e.avg_days)}d`
      )
    );
  }
  children.push(el("g", { class: "edges" }, bands));

  // milestone bars
  const bars: string[] = [];
  for (const m of payload.milestones) {
    const x = px(m.id);
    const h = Math.max(4, m.proportion * maxBar);
    const y = MARGIN.top + (maxBar - h) / 2;
    const isSel = selected === `milestone:${m.id}`;
    bars.push(
      el("rect", {
        class: `milestone${isSel ? " selected" : ""}`,
        "data-kind": "milestone",
        "data-id": m.id,
        x,
        y,
        width: BAR_WIDTH,
        height: h,
        fill: outcomeColor(m.avg_outcome, 0, 1, scale),
        stroke: isSel ? "#000" : "#333",
        "stroke-width": isSel ? 2 : 1,
      })
    );
    bars.push(
      text(
        "text",
        { x: x + BAR_WIDTH / 2, y: MARGIN.top - 8, "text-anchor": "middle", class: "milestone-label" },
        m.label
      )
    );
    bars.push(
      text(
        "text",
        { x: x + BAR_WIDTH / 2, y: height - 8, "text-anchor": "middle", class: "milestone-count" },
        String(m.count)
      )
    );
  }
  children.push(el("g", { class: "milestones" }, bars));

  return svgRoot(width, height, children);
}
