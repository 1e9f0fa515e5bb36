// @vitest-environment jsdom
import { describe, expect, it } from "vitest";
import { badgeHtml, orderingHtml, pinnedHtml } from "../src/list.js";
import type { KeyReport, RunResults, SessionView } from "../src/types.js";

const report: KeyReport = {
  kappa: 3,
  keys: [
    ["j2ee_specification", "satisfied"],
    ["pnp_framework", "denied"],
    ["new_database", "denied"],
  ],
  baseline_iqr: { o1: 10 },
  residual_iqr: { o1: 0.5 },
  collapse_ratio: { o1: 0.05 },
  collapsed: true,
  threshold: 0.1,
};

const results: RunResults = {
  ordering: {
    entries: [
      {
        node: "j2ee_specification",
        polarity: "satisfied",
        value: 0.91234,
        support: { o1: 1 },
        probability: { o1: 0.9 },
      },
      {
        node: "pnp_framework",
        polarity: "denied",
        value: 0.5,
        support: { o1: 0.5 },
        probability: { o1: 0.5 },
      },
    ],
  },
  curve: { decisions: [], objectives: [], points: [] },
  report,
  pinned: [],
  objectives: ["o1", "o2", "o3", "o4"],
  seed: 0,
  stale: false,
};

describe("orderingHtml", () => {
  it("lists decisions best-first with scores and both pin buttons", () => {
    const host = document.createElement("div");
    host.innerHTML = orderingHtml(results);
    const rows = Array.from(host.querySelectorAll("tbody tr"));
    expect(rows).toHaveLength(2);
    expect(rows[0].getAttribute("data-node")).toBe("j2ee_specification");
    expect(rows[0].querySelector(".score")?.textContent).toBe("0.912");
    const buttons = Array.from(rows[0].querySelectorAll("button"));
    expect(buttons.map((b) => b.dataset.polarity)).toEqual(["satisfied", "denied"]);
    expect(buttons.every((b) => b.dataset.action === "pin")).toBe(true);
  });
});

describe("pinnedHtml", () => {
  it("shows each pin with an unpin control", () => {
    const view: SessionView = {
      session_id: "s1",
      model_id: "m1",
      seed: 0,
      pinned: [["pnp_framework", "denied"]],
      objectives: ["o1", "o2", "o3", "o4"],
      stale: true,
      has_results: true,
    };
    const host = document.createElement("div");
    host.innerHTML = pinnedHtml(view);
    const btn = host.querySelector("button");
    expect(host.textContent).toContain("pnp_framework");
    expect(host.textContent).toContain("denied");
    expect(btn?.dataset.action).toBe("unpin");
    expect(btn?.dataset.node).toBe("pnp_framework");
  });

  it("says so when nothing is pinned", () => {
    const view: SessionView = {
      session_id: "s1",
      model_id: "m1",
      seed: 0,
      pinned: [],
      objectives: ["o1"],
      stale: false,
      has_results: false,
    };
    expect(pinnedHtml(view)).toContain("nothing pinned");
  });
});

describe("badgeHtml", () => {
  it("reports the key count, its share of decisions, and the spread ratio", () => {
    const html = badgeHtml(report, 24);
    expect(html).toContain('data-kappa="3"');
    expect(html).toContain("3 keys (12.5%)");
    expect(html).toContain("0.05");
    expect(html).toContain("collapsed");
  });
});
