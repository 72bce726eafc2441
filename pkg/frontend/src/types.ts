/** Payload shapes of the analytics service. All numbers displayed in the
 * UI come from these payloads; the client computes geometry only. */

export interface QuerySpec {
  inclusion: string[];
  outcome: string[];
  attribute_constraints?: { attribute: string; op: string; value: unknown }[];
  lookback_days?: number;
}

export interface CohortSummary {
  cohort_id: string;
  n: number;
  positive: number;
  warning: string | null;
}

export interface ScatterMark {
  code: string;
  label: string;
  x: number; // correlation with the outcome
  y: number; // prevalence
  chi2: number;
  p_value: number;
  seq_count: number;
  occ_count: number;
}

export interface HexBin {
  q: number;
  r: number;
  count: number;
}

export interface ScatterPayload {
  cohort_id: string;
  timeline_version: number;
  selection: string;
  r: number;
  pre_filter_size: number;
  pre_filter: string[];
  marks: ScatterMark[];
  hexbins: { radius: number; bins: HexBin[] };
  axis_domains: { x: [number, number]; y: [number, number] };
}

export interface FocusChild {
  code: string;
  x: number;
  y0: number;
  y: number; // optimized position
  d: number; // mark diameter
}

export interface FocusPayload {
  focus: string;
  ancestors: { code: string; x: number; depth: number }[];
  children: FocusChild[];
  x_domain: [number, number];
  y_max: number;
  guides: { zero: number; focus: number };
  cost: number;
  scents: Record<string, number>;
  selection: string;
  timeline_version: number;
  focus_stats: {
    prevalence: number;
    correlation: number;
    seq_count: number;
    is_leaf: boolean;
  };
}

export interface TimelineMilestone {
  id: string;
  type_code: string | null;
  label: string;
  count: number;
  proportion: number;
  avg_outcome: number;
}

export interface TimelineEdge {
  id: string;
  from: string;
  to: string;
  count: number;
  proportion: number;
  avg_outcome: number;
  avg_days: number;
}

export interface TimelinePayload {
  version: number;
  n: number;
  milestones: TimelineMilestone[];
  edges: TimelineEdge[];
  paths: { id: string; milestones: string[]; edges: string[]; count: number }[];
}

export interface SurvivalPayload {
  points: { t: number; s: number }[];
  censor_times: number[];
}

export type AttributeSummary =
  | {
      kind: "numeric";
      count: number;
      min: number;
      max: number;
      mean: number;
      histogram: { counts: number[]; edges: number[] };
    }
  | { kind: "categorical"; count: number; values: Record<string, number> };

export type AttributesPayload = Record<string, AttributeSummary>;

export interface EventTableRow {
  code: string;
  label: string;
  seq_count: number;
  occ_count: number;
  prevalence: number;
  chi2: number;
  p_value: number;
  correlation: number;
}
