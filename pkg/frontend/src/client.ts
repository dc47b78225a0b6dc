/** Thin HTTP client for the /v1 session API.  The only backend the
 * explorer talks to; every response buffer is parsed and validated before
 * anything downstream sees it. */

import {
  parseErrorDocument,
  parseSessionDocument,
  parseStatusDocument,
  parseViewDocument,
} from "./documents.js";
import type {
  SessionDocument,
  StatMode,
  StatusDocument,
  ViewDocument,
} from "./types.js";

export class ServiceError extends Error {
  override name = "ServiceError";

  constructor(
    public readonly reason: string,
    public readonly detail: string,
    public readonly status: number,
  ) {
    super(detail);
  }
}

export interface StatRequest {
  attribute: string;
  mode: StatMode;
  category?: string;
}

export interface SessionUpload {
  edges: string;
  attributes?: string;
  params?: Record<string, unknown>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => globalThis.fetch(...args),
  ) {}

  async createSession(upload: SessionUpload): Promise<SessionDocument> {
    const form = new FormData();
    form.append("edges", new Blob([upload.edges], { type: "text/plain" }), "edges.txt");
    if (upload.attributes !== undefined) {
      form.append(
        "attributes",
        new Blob([upload.attributes], { type: "text/plain" }),
        "attributes.tsv",
      );
    }
    if (upload.params !== undefined) {
      form.append(
        "params",
        new Blob([JSON.stringify(upload.params)], { type: "application/json" }),
        "params.json",
      );
    }
    const raw = await this.request(`${this.baseUrl}/v1/sessions`, { method: "POST", body: form });
    return parseSessionDocument(raw);
  }

  async status(sessionId: string): Promise<StatusDocument> {
    const raw = await this.request(this.sessionUrl(sessionId, "status"));
    return parseStatusDocument(raw);
  }

  async view(sessionId: string, stat?: StatRequest): Promise<ViewDocument> {
    let url = this.sessionUrl(sessionId, "view");
    if (stat) {
      const query = new URLSearchParams({ stat: stat.attribute, mode: stat.mode });
      if (stat.category !== undefined) {
        query.set("category", stat.category);
      }
      url = `${url}?${query.toString()}`;
    }
    const raw = await this.request(url);
    return parseViewDocument(raw);
  }

  async refine(sessionId: string, cluster: number): Promise<void> {
    await this.post(this.sessionUrl(sessionId, "refine"), { cluster });
  }

  async coarsen(sessionId: string, target: number): Promise<void> {
    await this.post(this.sessionUrl(sessionId, "coarsen"), { target });
  }

  async undo(sessionId: string): Promise<void> {
    await this.post(this.sessionUrl(sessionId, "undo"));
  }

  /** Download link for the export endpoint; the browser follows it
   * directly, so no fetch happens here. */
  exportUrl(sessionId: string, format: "view-json" | "hierarchy-json" | "svg" | "partition-tsv"): string {
    return `${this.sessionUrl(sessionId, "export")}?format=${format}`;
  }

  private sessionUrl(sessionId: string, leaf: string): string {
    return `${this.baseUrl}/v1/sessions/${encodeURIComponent(sessionId)}/${leaf}`;
  }

  private async post(url: string, body?: Record<string, unknown>): Promise<unknown> {
    const init: RequestInit = { method: "POST" };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    return this.request(url, init);
  }

  private async request(url: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(url, init);
    const text = await response.text();
    if (!response.ok) {
      throw toServiceError(text, response.status);
    }
    try {
      return JSON.parse(text) as unknown;
    } catch {
      throw new ServiceError("bad response", "service returned non-JSON body", response.status);
    }
  }
}

function toServiceError(body: string, status: number): ServiceError {
  try {
    const doc = parseErrorDocument(JSON.parse(body));
    return new ServiceError(doc.error.reason, doc.error.detail, status);
  } catch {
    return new ServiceError("http error", body.slice(0, 200) || `status ${status}`, status);
  }
}
