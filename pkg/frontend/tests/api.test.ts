import { describe, expect, it, vi } from "vitest";

import { ApiError, SessionApi } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("session api", () => {
  it("serializes commands and discards superseded responses", async () => {
    const order: string[] = [];
    const fetchFn = vi.fn(async (_url: string, init?: RequestInit) => {
      const { args } = JSON.parse(String(init?.body));
      order.push(args.feature);
      if (args.feature === "slow") {
        await new Promise((resolve) => setTimeout(resolve, 30));
      }
      return jsonResponse({ x_feature: args.feature });
    });
    const api = new SessionApi("http://svc.example", "s1", fetchFn);

    const slow = api.command("set_x_feature", { feature: "slow" });
    const fast = api.command("set_x_feature", { feature: "fast" });
    const [slowResult, fastResult] = await Promise.all([slow, fast]);

    // The slow command's response arrived after a newer command was issued:
    // its summary must not be applied.
    expect(slowResult).toBeNull();
    expect(fastResult).toEqual({ x_feature: "fast" });
    // Requests went out one at a time, in order.
    expect(order).toEqual(["slow", "fast"]);
  });

  it("discards payloads fetched before a newer command", async () => {
    let releasePayload: (() => void) | null = null;
    const fetchFn = vi.fn(async (url: string, init?: RequestInit) => {
      if (url.endsWith("/payload")) {
        await new Promise<void>((resolve) => {
          releasePayload = resolve;
        });
        return jsonResponse({ grid: [1], stale: true });
      }
      void init;
      return jsonResponse({ x_feature: "hour" });
    });
    const api = new SessionApi("http://svc.example", "s1", fetchFn);

    const payloadPromise = api.payload();
    await vi.waitFor(() => expect(releasePayload).not.toBeNull());
    await api.command("set_x_feature", { feature: "hour" });
    releasePayload!();
    expect(await payloadPromise).toBeNull();
  });

  it("surfaces machine-readable errors", async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse({ code: "chain_error", message: "already chained", detail: {} }, 400),
    );
    const api = new SessionApi("http://svc.example", "s1", fetchFn);
    await expect(api.command("add_feature", { feature: "hour" })).rejects.toMatchObject({
      code: "chain_error",
      status: 400,
    });
    try {
      await api.command("add_feature", { feature: "hour" });
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
    }
  });
});
