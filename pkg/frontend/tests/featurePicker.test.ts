import { beforeEach, describe, expect, it, vi } from "vitest";

import { SessionApi } from "../src/api.js";
import { renderFeaturePicker } from "../src/featurePicker.js";
import type { RankingPayload } from "../src/types.js";

import ranking from "./fixtures/ranking.json";

const rankingPayload = ranking as unknown as RankingPayload;

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement("div");
  document.body.replaceChildren(container);
});

describe("feature picker", () => {
  it("lays out one card per candidate, in ranking order", () => {
    renderFeaturePicker(container, rankingPayload, { onSelect: () => undefined });
    const cards = Array.from(container.querySelectorAll(".picker-card"));
    expect(cards.map((c) => c.getAttribute("data-feature"))).toEqual(
      rankingPayload.entries.map((e) => e.feature),
    );
    expect(container.querySelectorAll(".preview-standard").length).toBe(cards.length);
  });

  it("matches the frozen snapshot", () => {
    renderFeaturePicker(container, rankingPayload, { onSelect: () => undefined });
    expect(container.innerHTML).toMatchSnapshot();
  });

  it("toggles between standard and interaction previews", () => {
    renderFeaturePicker(container, rankingPayload, { onSelect: () => undefined });
    expect(container.getAttribute("data-preview-mode")).toBe("standard");
    (container.querySelector(".picker-toggle") as HTMLButtonElement).click();
    expect(container.getAttribute("data-preview-mode")).toBe("interaction");
    expect(container.querySelectorAll(".preview-interaction").length).toBe(
      rankingPayload.entries.length,
    );
    expect(container.querySelectorAll(".preview-interaction-line").length).toBeGreaterThan(0);
  });

  it("click dispatches exactly one command POST", async () => {
    const posts: { url: string; body: unknown }[] = [];
    const fetchFn = vi.fn(async (url: string, init?: RequestInit) => {
      if (init?.method === "POST") {
        posts.push({ url, body: JSON.parse(String(init.body)) });
      }
      return new Response(JSON.stringify({ session_id: "s1", x_feature: "hour" }), {
        status: 200,
        headers: { "content-type": "application/json" },
      });
    });
    const api = new SessionApi("http://svc.example", "s1", fetchFn);

    renderFeaturePicker(container, rankingPayload, {
      onSelect: (feature) => void api.command("add_feature", { feature }),
    });
    const card = container.querySelector(
      '.picker-card[data-feature="workingday"]',
    ) as HTMLButtonElement;
    card.click();
    await vi.waitFor(() => expect(posts.length).toBeGreaterThan(0));

    expect(posts.length).toBe(1);
    expect(posts[0].url).toBe("http://svc.example/sessions/s1/commands");
    expect(posts[0].body).toEqual({
      command: "add_feature",
      args: { feature: "workingday" },
    });
  });

  it("shows an empty state when nothing remains", () => {
    renderFeaturePicker(container, { score_kind: "interaction_at_instance", entries: [] }, {
      onSelect: () => undefined,
    });
    expect(container.querySelector(".picker-empty")).not.toBeNull();
    expect(container.querySelectorAll(".picker-card").length).toBe(0);
  });
});
