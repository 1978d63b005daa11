import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, NetworkError, SurveyApi } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("SurveyApi", () => {
  it("creates sessions with an empty JSON body", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(201, { token: "t", schema_id: "s", schema_version: "1" }));
    vi.stubGlobal("fetch", fetchMock);
    const api = new SurveyApi("http://x");
    const created = await api.createSession();
    expect(created.token).toBe("t");
    expect(fetchMock).toHaveBeenCalledWith(
      "http://x/api/v1/sessions",
      expect.objectContaining({ method: "POST", body: "{}" }),
    );
  });

  it("submits answers with question id and value", async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(200, { session: { answers: {} }, next: { complete: true, answered_count: 0 } }),
    );
    vi.stubGlobal("fetch", fetchMock);
    const api = new SurveyApi("http://x");
    await api.submitAnswer("tok", "q1", { kind: "boolean", value: true });
    const [url, init] = fetchMock.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("http://x/api/v1/sessions/tok/answers");
    expect(JSON.parse(String(init.body))).toEqual({
      question_id: "q1",
      value: { kind: "boolean", value: true },
    });
  });

  it("maps API failures to ApiError with the machine-readable body", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(422, { code: "question-not-visible", detail: "hidden" })));
    const api = new SurveyApi("http://x");
    const failure = await api.getNext("tok").catch((error) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(422);
    expect(failure.body.code).toBe("question-not-visible");
  });

  it("maps connection failures to NetworkError", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => {
      throw new TypeError("fetch failed");
    }));
    const api = new SurveyApi("http://x");
    await expect(api.getSession("tok")).rejects.toBeInstanceOf(NetworkError);
  });

  it("builds report URLs for every format", () => {
    const api = new SurveyApi("http://x");
    expect(api.reportUrl("tok", "md")).toBe("http://x/api/v1/reports/tok?format=md");
    expect(api.reportUrl("tok", "json")).toBe("http://x/api/v1/reports/tok?format=json");
    expect(api.reportUrl("tok", "nt")).toBe("http://x/api/v1/reports/tok?format=nt");
  });
});
