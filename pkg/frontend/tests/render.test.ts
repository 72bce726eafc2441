import { describe, expect, it } from "vitest";
import { densityColor, outcomeColor } from "../src/color";
import { renderAttributes } from "../src/render/attributes";
import { renderFocus } from "../src/render/focus";
import { renderScatter } from "../src/render/scatter";
import { renderSurvival } from "../src/render/survival";
import { renderTable } from "../src/render/table";
import { renderTimeline } from "../src/render/timeline";
import { el, esc, fmt, scaleLinear } from "../src/svg";
import type {
  AttributesPayload,
  EventTableRow,
  FocusPayload,
  ScatterPayload,
  SurvivalPayload,
  TimelinePayload,
} from "../src/types";

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

function scatterPayload(overrides: Partial<ScatterPayload> = {}): ScatterPayload {
  return {
    cohort_id: "abc",
    timeline_version: 0,
    selection: "whole-record",
    r: 0,
    pre_filter_size: 2,
    pre_filter: ["SUB", "OPI"],
    marks: [
      { code: "SUB", label: "substance abuse", x: 0.4, y: 0.2, chi2: 30, p_value: 1e-8, seq_count: 360, occ_count: 360 },
      { code: "OPI", label: "opiate related", x: 0.9, y: 0.07, chi2: 90, p_value: 1e-20, seq_count: 121, occ_count: 121 },
    ],
    hexbins: { radius: 0.05, bins: [{ q: 0, r: 0, count: 4 }, { q: 2, r: -1, count: 1 }] },
    axis_domains: { x: [-1, 1], y: [0, 1] },
    ...overrides,
  };
}

describe("svg helpers", () => {
  it("escapes markup-significant characters", () => {
    expect(esc(`<a & "b">`)).toBe("&lt;a &amp; &quot;b&quot;&gt;");
  });

  it("rounds coordinates to three decimals", () => {
    expect(fmt(1 / 3)).toBe("0.333");
    expect(fmt(NaN)).toBe("0");
  });

  it("builds nested elements", () => {
    expect(el("g", { class: "x" }, [el("line", { x1: 0 })])).toBe(
      `<g class="x"><line x1="0"></line></g>`
    );
  });

  it("maps domains linearly and survives a degenerate domain", () => {
    const s = scaleLinear(0, 10, 100, 200);
    expect(s(5)).toBe(150);
    expect(scaleLinear(3, 3, 0, 10)(3)).toBe(5);
  });
});

describe("color ramps", () => {
  it("spans the outcome ramp endpoints", () => {
    expect(outcomeColor(-1, -1, 1)).toBe("rgb(26,152,80)");
    expect(outcomeColor(1, -1, 1)).toBe("rgb(215,48,39)");
    expect(outcomeColor(0, -1, 1)).toBe("rgb(255,255,191)");
  });

  it("offers a colorblind-safe alternative with distinct endpoints", () => {
    expect(outcomeColor(-1, -1, 1, "colorblind-safe")).toBe("rgb(69,117,180)");
    expect(outcomeColor(1, -1, 1, "colorblind-safe")).toBe("rgb(230,97,1)");
  });

  it("darkens hexbin density monotonically on a log scale", () => {
    const light = densityColor(1, 100);
    const dark = densityColor(100, 100);
    expect(light).not.toBe(dark);
    expect(densityColor(100, 100)).toBe("rgb(64,64,64)");
    expect(densityColor(0, 100)).toBe("rgb(245,245,245)");
  });
});

describe("renderScatter", () => {
  it("draws one circle per mark and one polygon per hexbin", () => {
    const svg = renderScatter(scatterPayload());
    expect(count(svg, "<circle")).toBe(2);
    expect(count(svg, "<polygon")).toBe(2);
    expect(svg).toContain(`data-code="SUB"`);
    expect(svg).toContain(`data-code="OPI"`);
    expect(svg).toContain(`data-count="4"`);
  });

  it("flags locked and highlighted marks", () => {
    const svg = renderScatter(scatterPayload(), {
      locked: new Set(["SUB"]),
      highlight: "opiate",
    });
    expect(svg).toContain(`class="mark locked"`);
    expect(svg).toContain(`class="mark highlight"`);
  });

  it("shows a notice when the cut is empty", () => {
    const svg = renderScatter(scatterPayload({ marks: [] }));
    expect(svg).toContain("no informative event types in this context");
    expect(count(svg, "<circle")).toBe(0);
  });
});

describe("renderFocus", () => {
  const payload: FocusPayload = {
    focus: "SUB",
    ancestors: [{ code: "ROOT", x: 0.1, depth: 0 }],
    children: [
      { code: "SUB.NIC", x: 0.5, y0: 0.15, y: 0.16, d: 0.02 },
      { code: "SUB.ALC", x: 0.1, y0: 0.05, y: 0.05, d: 0.01 },
    ],
    x_domain: [-1, 1],
    y_max: 0.2,
    guides: { zero: 0, focus: 0.4 },
    cost: 0.001,
    scents: { SUB: 0.4, "SUB.NIC": 0, "SUB.ALC": 0 },
    selection: "whole-record",
    timeline_version: 0,
    focus_stats: { prevalence: 0.2, correlation: 0.4, seq_count: 360, is_leaf: false },
  };

  it("draws the ancestor chain, focus mark, and children", () => {
    const svg = renderFocus(payload);
    expect(svg).toContain(`class="focus-mark"`);
    expect(svg).toContain(`data-code="ROOT"`);
    expect(count(svg, `class="child"`)).toBe(2);
    expect(count(svg, `class="ancestor-arc"`)).toBe(1);
    expect(svg).toContain(`class="guide-zero"`);
    expect(svg).toContain(`class="guide-focus"`);
  });

  it("scales scent triangle width linearly and ticks zero-scent children", () => {
    const svg = renderFocus(payload);
    // the focus node carries the max scent, so its triangle spans the
    // full width range
    expect(svg).toContain(`data-scent="0.4"`);
    const scentPoly = svg.split("<polygon").find((s) => s.includes("data-scent"));
    expect(scentPoly).toBeDefined();
    // width 14 centered on the mark: half-width 7 on each side
    const pts = (scentPoly as string).match(/points="([^"]+)"/) as RegExpMatchArray;
    const xs = pts[1].split(" ").map((p) => Number(p.split(",")[0]));
    expect(Math.abs(xs[1] - xs[0])).toBeCloseTo(14, 3);
    // zero-scent children get the flat leaf tick instead of a triangle
    expect(count(svg, `class="scent-leaf"`)).toBe(2);
  });

  it("shows a notice for a leaf focus with no children", () => {
    const svg = renderFocus({
      ...payload,
      focus: "SUB.NIC",
      children: [],
      focus_stats: { ...payload.focus_stats, is_leaf: true },
    });
    expect(svg).toContain("SUB.NIC has no subtypes");
  });
});

describe("renderTimeline", () => {
  const payload: TimelinePayload = {
    version: 1,
    n: 1732,
    milestones: [
      { id: "m0", type_code: "PAIN", label: "PAIN", count: 1732, proportion: 1, avg_outcome: 0.07 },
      { id: "m2", type_code: "SUB.NIC", label: "SUB.NIC", count: 360, proportion: 0.208, avg_outcome: 0.34 },
      { id: "m1", type_code: "DISCH", label: "DISCH", count: 1732, proportion: 1, avg_outcome: 0.07 },
    ],
    edges: [
      { id: "e2", from: "m0", to: "m2", count: 360, proportion: 0.208, avg_outcome: 0.34, avg_days: 3 },
      { id: "e3", from: "m2", to: "m1", count: 360, proportion: 0.208, avg_outcome: 0.34, avg_days: 16 },
      { id: "e4", from: "m0", to: "m1", count: 1372, proportion: 0.792, avg_outcome: 0.0, avg_days: 19 },
    ],
    paths: [
      { id: "p0", milestones: ["m0", "m2", "m1"], edges: ["e2", "e3"], count: 360 },
      { id: "p1", milestones: ["m0", "m1"], edges: ["e4"], count: 1372 },
    ],
  };

  it("draws a bar per milestone and a band per edge with counts", () => {
    const svg = renderTimeline(payload);
    expect(count(svg, `data-kind="milestone"`)).toBe(3);
    expect(count(svg, `data-kind="edge"`)).toBe(3);
    expect(svg).toContain(">1732<");
    expect(svg).toContain(">360<");
    expect(svg).toContain("1372 · 19d");
  });

  it("marks the selected element", () => {
    const svg = renderTimeline(payload, { selected: "edge:e4" });
    expect(svg).toContain(`class="edge selected"`);
    expect(count(svg, "selected")).toBe(1);
  });

  it("orders milestones by cumulative average duration", () => {
    const svg = renderTimeline(payload);
    const xOf = (id: string): number => {
      const m = svg.match(new RegExp(`data-id="${id}" x="([0-9.]+)"`)) as RegExpMatchArray;
      return Number(m[1]);
    };
    expect(xOf("m0")).toBeLessThan(xOf("m2"));
    expect(xOf("m2")).toBeLessThan(xOf("m1"));
  });
});

describe("renderSurvival", () => {
  const payload: SurvivalPayload = {
    points: [
      { t: 0, s: 1 },
      { t: 2, s: 0.8 },
      { t: 4, s: 8 / 15 },
    ],
    censor_times: [3, 5],
  };

  it("draws a step path starting at S(0)=1 with censor ticks", () => {
    const svg = renderSurvival(payload);
    const d = (svg.match(/ d="([^"]+)"/) as RegExpMatchArray)[1];
    expect(d.startsWith("M ")).toBe(true);
    expect(count(d, "V")).toBe(2);
    expect(count(svg, `class="censor"`)).toBe(2);
  });

  it("places a censor tick on the step level active at its time", () => {
    const svg = renderSurvival(payload, { width: 420, height: 260 });
    // t=3 sits on the S=0.8 step; t=5 on the final step
    const ticks = svg.split(`class="censor"`).slice(1);
    const y1 = Number((ticks[0].match(/y1="([0-9.-]+)"/) as RegExpMatchArray)[1]);
    const y2 = Number((ticks[1].match(/y1="([0-9.-]+)"/) as RegExpMatchArray)[1]);
    expect(y2).toBeGreaterThan(y1); // lower survival renders lower on screen
  });
});

describe("renderAttributes", () => {
  const payload: AttributesPayload = {
    age: {
      kind: "numeric",
      count: 1732,
      min: 30,
      max: 79,
      mean: 54.2,
      histogram: { counts: [100, 400, 900, 332], edges: [30, 42.25, 54.5, 66.75, 79] },
    },
    sex: { kind: "categorical", count: 1732, values: { f: 900, m: 832 } },
  };

  it("renders histogram bins with edges and categorical bars with counts", () => {
    const svg = renderAttributes(payload);
    expect(count(svg, `class="bin"`)).toBe(4);
    expect(svg).toContain(`data-lo="30"`);
    expect(svg).toContain(`data-hi="42.25"`);
    expect(count(svg, `class="bar"`)).toBe(2);
    expect(svg).toContain("f (900)");
    expect(svg).toContain("age (n=1732, mean=54.2)");
  });
});

describe("renderTable", () => {
  const rows: EventTableRow[] = [
    { code: "SUB", label: "substance abuse", seq_count: 360, occ_count: 360, prevalence: 0.2, chi2: 30, p_value: 1e-8, correlation: 0.53 },
    { code: "OPI", label: "opiate related", seq_count: 121, occ_count: 121, prevalence: 0.07, chi2: 90, p_value: 1e-20, correlation: 0.9 },
  ];

  it("renders sortable headers and one row per event type", () => {
    const html = renderTable(rows, "seq_count");
    expect(count(html, "<tr data-code=")).toBe(2);
    expect(html).toContain(`data-sort="occ_count"`);
    expect(html).toContain(`data-sort="correlation"`);
    expect(html).toContain(`class="sorted"`);
    expect(html).not.toContain(`class="sorted" data-sort="occ_count"`);
    expect(html).toContain("<td>360</td>");
  });

  it("escapes labels", () => {
    const html = renderTable(
      [{ ...rows[0], label: `a < "b"` }],
      "correlation"
    );
    expect(html).toContain("a &lt; &quot;b&quot;");
  });
});
