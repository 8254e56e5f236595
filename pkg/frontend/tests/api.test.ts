import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { FixtureServer, makeReport } from "./fixture_server.js";

describe("ApiClient", () => {
  let server: FixtureServer;

  beforeEach(async () => {
    server = new FixtureServer();
    await server.start();
  });

  afterEach(async () => {
    await server.stop();
  });

  it("creates a session and returns the opener", async () => {
    const client = new ApiClient({ apiBaseUrl: server.url });
    const created = await client.createSession();
    expect(created.session_id).toBe("fixture-session-1");
    expect(created.question.text).toBe("How are you feeling today?");
  });

  it("posts messages and parses the aggregate", async () => {
    server.queueMessageResponse({
      score: 0.42,
      aggregate: { max_prob: 0.42, ewma_prob: 0.42, flagged_count: 0, level: "none" },
    });
    const client = new ApiClient({ apiBaseUrl: server.url });
    const result = await client.postMessage("fixture-session-1", "hello");
    expect(result.score).toBeCloseTo(0.42);
    expect(result.aggregate.level).toBe("none");
    expect(server.seenMessages).toEqual([
      { sessionId: "fixture-session-1", text: "hello" },
    ]);
  });

  it("fetches reports", async () => {
    server.reports.set("fixture-session-1", makeReport());
    const client = new ApiClient({ apiBaseUrl: server.url });
    const report = await client.getReport("fixture-session-1");
    expect(report.recommended_action).toBe("no action indicated");
  });

  it("maps 404 to ApiError.notFound", async () => {
    const client = new ApiClient({ apiBaseUrl: server.url });
    const error = await client.getReport("nope").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).notFound).toBe(true);
  });

  it("flags missing token as unauthorized", async () => {
    await server.stop();
    server = new FixtureServer({ token: "sekrit" });
    await server.start();
    const bare = new ApiClient({ apiBaseUrl: server.url });
    const error = await bare.createSession().catch((e) => e);
    expect((error as ApiError).unauthorized).toBe(true);

    const authed = new ApiClient({ apiBaseUrl: server.url, token: "sekrit" });
    const created = await authed.createSession();
    expect(created.session_id).toBe("fixture-session-1");
  });

  it("maps a dead server to an unreachable error", async () => {
    const url = server.url;
    await server.stop();
    const client = new ApiClient({ apiBaseUrl: url });
    const error = await client.createSession().catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).unreachable).toBe(true);
  });
});
