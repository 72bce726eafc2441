import { describe, expect, it } from "vitest";
import { ApiClient, ApiError, FetchLike } from "../src/api";

interface Call {
  url: string;
  method: string;
  body?: string;
}

function fakeFetch(
  respond: (url: string) => { status: number; payload: unknown },
  calls: Call[]
): FetchLike {
  return async (url, init) => {
    calls.push({ url, method: init?.method ?? "GET", body: init?.body });
    const { status, payload } = respond(url);
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => payload,
    };
  };
}

describe("ApiClient", () => {
  it("builds endpoint urls and parses payloads", async () => {
    const calls: Call[] = [];
    const client = new ApiClient(
      "http://svc",
      fakeFetch(() => ({ status: 200, payload: { cohort_id: "abc", n: 5, positive: 2, warning: null } }), calls)
    );
    const summary = await client.query("use-case", { inclusion: ["A"], outcome: ["B"] });
    expect(summary.cohort_id).toBe("abc");
    expect(calls[0].url).toBe("http://svc/datasets/use-case/query");
    expect(calls[0].method).toBe("POST");
    expect(JSON.parse(calls[0].body as string)).toEqual({ inclusion: ["A"], outcome: ["B"] });

    await client.scatter("abc", 0.25);
    expect(calls[1].url).toBe("http://svc/cohorts/abc/scatter?R=0.25");

    await client.focus("abc", "I50.1");
    expect(calls[2].url).toBe("http://svc/cohorts/abc/focus/I50.1");

    await client.eventsTable("abc", "correlation", 50);
    expect(calls[3].url).toBe("http://svc/cohorts/abc/events/table?sort=correlation&limit=50");

    await client.select("abc", { edge: "e1" });
    expect(calls[4].body).toBe(JSON.stringify({ edge: "e1" }));

    await client.addMilestone("abc", "e1", "SUB.NIC");
    expect(calls[5].url).toBe("http://svc/cohorts/abc/milestones");
    expect(JSON.parse(calls[5].body as string)).toEqual({ edge: "e1", code: "SUB.NIC" });
  });

  it("maps error responses to ApiError with the detail payload", async () => {
    const detail = { error: "UnknownCode", message: "no such type" };
    const client = new ApiClient(
      "",
      fakeFetch(() => ({ status: 404, payload: { detail } }), [])
    );
    const err = await client.focus("abc", "NOPE").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).detail).toEqual(detail);
  });

  it("falls back to the raw payload when detail is absent", async () => {
    const client = new ApiClient(
      "",
      fakeFetch(() => ({ status: 500, payload: { oops: true } }), [])
    );
    const err = (await client.survival("abc").catch((e: unknown) => e)) as ApiError;
    expect(err.detail).toEqual({ oops: true });
  });

  it("escapes path segments", async () => {
    const calls: Call[] = [];
    const client = new ApiClient("", fakeFetch(() => ({ status: 200, payload: {} }), calls));
    await client.focus("abc", "A/B");
    expect(calls[0].url).toBe("/cohorts/abc/focus/A%2FB");
  });
});
