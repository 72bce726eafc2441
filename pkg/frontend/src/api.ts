import type {
  AttributesPayload,
  CohortSummary,
  EventTableRow,
  FocusPayload,
  QuerySpec,
  ScatterPayload,
  SurvivalPayload,
  TimelinePayload,
} from "./types";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string }
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown
  ) {
    super(`service error ${status}`);
  }
}

/** Thin typed wrapper over the HTTP endpoints. The client never derives
 * analytics values itself; every number shown comes from the service. */
export class ApiClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = (...args) =>
      (globalThis.fetch as unknown as FetchLike)(...args)
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, (payload as { detail?: unknown }).detail ?? payload);
    }
    return payload as T;
  }

  query(datasetId: string, spec: QuerySpec): Promise<CohortSummary> {
    return this.request("POST", `/datasets/${encodeURIComponent(datasetId)}/query`, spec);
  }

  scatter(cohortId: string, r: number): Promise<ScatterPayload> {
    return this.request("GET", `/cohorts/${cohortId}/scatter?R=${r}`);
  }

  focus(cohortId: string, code: string): Promise<FocusPayload> {
    return this.request("GET", `/cohorts/${cohortId}/focus/${encodeURIComponent(code)}`);
  }

  timeline(cohortId: string, version?: number): Promise<TimelinePayload> {
    const suffix = version === undefined ? "" : `?version=${version}`;
    return this.request("GET", `/cohorts/${cohortId}/timeline${suffix}`);
  }

  select(
    cohortId: string,
    selection: { milestone?: string; edge?: string; whole_record?: boolean }
  ): Promise<{ selection: string; timeline_version: number }> {
    return this.request("POST", `/cohorts/${cohortId}/selection`, selection);
  }

  addMilestone(
    cohortId: string,
    edge: string,
    code: string
  ): Promise<{ timeline_version: number }> {
    return this.request("POST", `/cohorts/${cohortId}/milestones`, { edge, code });
  }

  survival(cohortId: string): Promise<SurvivalPayload> {
    return this.request("GET", `/cohorts/${cohortId}/survival`);
  }

  attributes(cohortId: string): Promise<AttributesPayload> {
    return this.request("GET", `/cohorts/${cohortId}/attributes`);
  }

  eventsTable(cohortId: string, sort: string, limit?: number): Promise<EventTableRow[]> {
    const suffix = limit === undefined ? "" : `&limit=${limit}`;
    return this.request("GET", `/cohorts/${cohortId}/events/table?sort=${sort}${suffix}`);
  }
}
