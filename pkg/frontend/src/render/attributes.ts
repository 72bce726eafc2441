import { el, fmt, svgRoot, text } from "../svg";
import type { AttributesPayload, AttributeSummary } from "../types";

export interface AttributesOptions {
  width?: number;
  barHeight?: number;
}

const MARGIN = { top: 18, right: 10, bottom: 6, left: 10 };

function numericChart(name: string, attr: Extract<AttributeSummary, { kind: "numeric" }>,
                      width: number, chartHeight: number): string {
  const counts = attr.histogram.counts;
  const edges = attr.histogram.edges;
  const maxCount = Math.max(1, ...counts);
  const innerW = width - MARGIN.left - MARGIN.right;
  const bw = innerW / counts.length;
  const bars: string[] = [];
  for (let i = 0; i < counts.length; i++) {
    const h = (counts[i] / maxCount) * (chartHeight - MARGIN.top - MARGIN.bottom);
    bars.push(
      el("rect", {
        class: "bin",
        "data-attribute": name,
        "data-lo": fmt(edges[i]),
        "data-hi": fmt(edges[i + 1]),
        x: MARGIN.left + i * bw + 1,
        y: chartHeight - MARGIN.bottom - h,
        width: Math.max(bw - 2, 1),
        height: Math.max(h, counts[i] > 0 ? 1 : 0),
        fill: "#6b8cae",
      })
    );
  }
  bars.push(
    text("text", { x: MARGIN.left, y: 12, class: "attr-title" },
      `${name} (n=${attr.count}, mean=${fmt(attr.mean)})`)
  );
  return el("g", { class: `attribute numeric`, "data-attribute": name }, bars);
}

function categoricalChart(name: string, attr: Extract<AttributeSummary, { kind: "categorical" }>,
                          width: number, barHeight: number): string {
  const entries = Object.entries(attr.values).sort((a, b) => b[1] - a[1]);
  const maxCount = Math.max(1, ...entries.map(([, c]) => c));
  const innerW = width - MARGIN.left - MARGIN.right - 80;
  const rows: string[] = [
    text("text", { x: MARGIN.left, y: 12, class: "attr-title" }, `${name} (n=${attr.count})`),
  ];
  entries.forEach(([value, count], i) => {
    const y = MARGIN.top + i * barHeight;
    rows.push(
      el("rect", {
        class: "bar",
        "data-attribute": name,
        "data-value": value,
        x: MARGIN.left + 76,
        y,
        width: Math.max((count / maxCount) * innerW, 1),
        height: barHeight - 3,
        fill: "#6b8cae",
      })
    );
    rows.push(text("text", { x: MARGIN.left, y: y + barHeight - 6, class: "bar-label" },
      `${value} (${count})`));
  });
  return el("g", { class: "attribute categorical", "data-attribute": name }, rows);
}

/** One chart per attribute: histogram bins for numeric attributes, one
 * bar per value for categorical ones. Bars/bins carry data attributes
 * for the filter interaction. */
export function renderAttributes(payload: AttributesPayload, opts: AttributesOptions = {}): string {
  const width = opts.width ?? 320;
  const barHeight = opts.barHeight ?? 16;
  const charts: string[] = [];
  let y = 0;
  for (const name of Object.keys(payload).sort()) {
    const attr = payload[name];
    const h =
      attr.kind === "numeric"
        ? 90
        : MARGIN.top + Object.keys(attr.values).length * barHeight + MARGIN.bottom;
    const chart =
      attr.kind === "numeric"
        ? numericChart(name, attr, width, h)
        : categoricalChart(name, attr, width, barHeight);
    charts.push(el("g", { transform: `translate(0 ${y})` }, [chart]));
    y += h + 8;
  }
  return svgRoot(width, Math.max(y, 40), charts);
}
