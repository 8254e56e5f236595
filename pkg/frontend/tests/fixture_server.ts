// Minimal scriptable double of the chatscreen service for tests.

import { createServer, IncomingMessage, Server, ServerResponse } from "node:http";
import type { AddressInfo } from "node:net";
import type { Aggregate, MessageResponse, Report } from "../src/api.js";

export interface FixtureOptions {
  token?: string;
  openingQuestion?: { id: string; text: string };
}

const DEFAULT_AGGREGATE: Aggregate = {
  max_prob: 0.1, ewma_prob: 0.1, flagged_count: 0, level: "none",
};

export class FixtureServer {
  readonly messageResponses: MessageResponse[] = [];
  readonly seenMessages: { sessionId: string; text: string }[] = [];
  reports = new Map<string, Report>();
  failNextMessageWith: number | null = null;
  activeRequests = 0;
  maxConcurrentRequests = 0;
  private server: Server | null = null;
  private readonly options: FixtureOptions;

  constructor(options: FixtureOptions = {}) {
    this.options = options;
  }

  get url(): string {
    const address = this.server?.address() as AddressInfo;
    return `http://127.0.0.1:${address.port}`;
  }

  queueMessageResponse(partial: Partial<MessageResponse>): void {
    this.messageResponses.push({
      score: partial.score ?? 0.1,
      next_question: partial.next_question ?? { id: "q2", text: "And then?" },
      aggregate: partial.aggregate ?? DEFAULT_AGGREGATE,
    });
  }

  async start(): Promise<void> {
    this.server = createServer((req, res) => { void this.route(req, res); });
    await new Promise<void>((resolve) => this.server!.listen(0, "127.0.0.1", resolve));
  }

  async stop(): Promise<void> {
    if (this.server) {
      await new Promise<void>((resolve, reject) =>
        this.server!.close((err) => (err ? reject(err) : resolve())));
      this.server = null;
    }
  }

  private send(res: ServerResponse, status: number, payload: unknown): void {
    const body = JSON.stringify(payload);
    res.writeHead(status, {
      "Content-Type": "application/json",
      "Access-Control-Allow-Origin": "*",
    });
    res.end(body);
  }

  private async readBody(req: IncomingMessage): Promise<string> {
    const chunks: Buffer[] = [];
    for await (const chunk of req) {
      chunks.push(chunk as Buffer);
    }
    return Buffer.concat(chunks).toString("utf-8");
  }

  private async route(req: IncomingMessage, res: ServerResponse): Promise<void> {
    this.activeRequests += 1;
    this.maxConcurrentRequests = Math.max(this.maxConcurrentRequests, this.activeRequests);
    try {
      // simulate work so overlapping requests would be observable
      await new Promise((resolve) => setTimeout(resolve, 5));
      if (this.options.token !== undefined &&
          req.headers.authorization !== `Bearer ${this.options.token}`) {
        this.send(res, 401, { detail: "invalid or missing bearer token" });
        return;
      }
      const url = req.url ?? "";
      if (req.method === "POST" && url === "/v1/sessions") {
        this.send(res, 200, {
          session_id: "fixture-session-1",
          question: this.options.openingQuestion ??
            { id: "q1", text: "How are you feeling today?" },
        });
        return;
      }
      const messageMatch = url.match(/^\/v1\/sessions\/([^/]+)\/messages$/);
      if (req.method === "POST" && messageMatch) {
        const body = JSON.parse(await this.readBody(req)) as { text: string };
        if (this.failNextMessageWith !== null) {
          const status = this.failNextMessageWith;
          this.failNextMessageWith = null;
          this.send(res, status, { detail: "scripted failure" });
          return;
        }
        this.seenMessages.push({ sessionId: messageMatch[1], text: body.text });
        const scripted = this.messageResponses.shift();
        this.send(res, 200, scripted ?? {
          score: 0.1,
          next_question: { id: "q2", text: "And then?" },
          aggregate: DEFAULT_AGGREGATE,
        });
        return;
      }
      const reportMatch = url.match(/^\/v1\/sessions\/([^/]+)\/report$/);
      if (req.method === "GET" && reportMatch) {
        const report = this.reports.get(reportMatch[1]);
        if (!report) {
          this.send(res, 404, { detail: "session not found" });
          return;
        }
        this.send(res, 200, report);
        return;
      }
      if (req.method === "GET" && url === "/v1/health") {
        this.send(res, 200, { status: "ok", model_checksum: "f1x7ure0" });
        return;
      }
      this.send(res, 404, { detail: "no such route" });
    } finally {
      this.activeRequests -= 1;
    }
  }
}

export function makeReport(overrides: Partial<Report> = {}): Report {
  return {
    session_id: "fixture-session-1",
    generated_at: "2025-06-01T10:00:00+00:00",
    state: "active",
    transcript: [
      { role: "bot", text: "How are you feeling today?", timestamp: "t0" },
      { role: "user", text: "not great", timestamp: "t1" },
      { role: "bot", text: "And then?", timestamp: "t2" },
    ],
    scores: [0.2],
    flagged: [],
    aggregate: { max_prob: 0.2, ewma_prob: 0.2, flagged_count: 0, level: "none" },
    recommended_action: "no action indicated",
    model_checksum: "f1x7ure0",
    other_findings: [],
    ...overrides,
  };
}
