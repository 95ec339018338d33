/** Client for the explanation service.
 *
 * Every state change round-trips through the server: the client never
 * mutates locally, so chart and engine cannot disagree.  Commands are
 * serialized per session, and responses carry a sequence number; anything
 * that resolves after a newer request has been issued is discarded.
 */

import type { RankingPayload, StateSummary, ViewPayload } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(body.code ?? "http_error", body.message ?? response.statusText, response.status);
  }
  return body as T;
}

export class SessionApi {
  private sequence = 0;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private baseUrl: string,
    public sessionId: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  /** POST one command; resolves null when a newer request superseded it. */
  command(command: string, args: Record<string, unknown> = {}): Promise<StateSummary | null> {
    const mySeq = ++this.sequence;
    const run = async (): Promise<StateSummary | null> => {
      const response = await this.fetchFn(
        `${this.baseUrl}/sessions/${this.sessionId}/commands`,
        {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify({ command, args }),
        },
      );
      const summary = await parseOrThrow<StateSummary>(response);
      return mySeq === this.sequence ? summary : null;
    };
    const next = this.queue.then(run, run);
    this.queue = next.catch(() => undefined);
    return next;
  }

  /** GET the payload; resolves null when the state moved on mid-flight. */
  async payload(): Promise<ViewPayload | null> {
    const mySeq = this.sequence;
    const response = await this.fetchFn(`${this.baseUrl}/sessions/${this.sessionId}/payload`);
    const body = await parseOrThrow<ViewPayload>(response);
    return mySeq === this.sequence ? body : null;
  }

  async ranking(kind?: string): Promise<RankingPayload | null> {
    const mySeq = this.sequence;
    const url = new URL(`${this.baseUrl}/sessions/${this.sessionId}/ranking`, "http://resolve.invalid");
    if (kind) url.searchParams.set("kind", kind);
    const target = this.baseUrl.startsWith("http") ? url.toString() : url.pathname + url.search;
    const response = await this.fetchFn(target);
    const body = await parseOrThrow<RankingPayload>(response);
    return mySeq === this.sequence ? body : null;
  }
}

export async function createSession(
  baseUrl: string,
  datasetId: string,
  target: { mode: string; class_label?: string },
  instance: { row?: number; values?: Record<string, number> },
  fetchFn: FetchLike = (url, init) => fetch(url, init),
): Promise<SessionApi> {
  const response = await fetchFn(`${baseUrl}/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ dataset_id: datasetId, target, instance }),
  });
  const body = await parseOrThrow<{ session_id: string }>(response);
  return new SessionApi(baseUrl, body.session_id, fetchFn);
}
