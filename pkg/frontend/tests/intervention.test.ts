/* Cross-class fixtures must surface the adjacency-diff intervention panel,
 * and stale-version mutations must silently refetch and retry once. */

import { afterAll, beforeAll, describe, expect, inject, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { FoldPlanClient } from "../src/api.js";
import { Dashboard } from "../src/app.js";
import { button, dragNode, until, uploadFixture } from "./helpers.js";

const base = inject("base");
const corpus = inject("corpus");

describe("mismatch intervention", () => {
  let root: HTMLElement;
  let dash: Dashboard;
  const client = new FoldPlanClient(base);

  beforeAll(async () => {
    // seed the library with a long-sleeve plan; fixtures loaded are trousers
    const doc = JSON.parse(
      readFileSync(join(corpus, "plans", "long-sleeve-top.plan.json"), "utf8"),
    );
    await client.putPlan(doc);
    root = document.createElement("div");
    document.body.appendChild(root);
    dash = new Dashboard(root, client, { pollMs: 0 });
  });

  afterAll(() => {
    dash.dispose();
    root.remove();
  });

  it("surfaces the adjacency-diff panel for a cross-class fixture", async () => {
    uploadFixture(root, join(corpus, "items", "trousers", "trousers-007.png"));
    await until(() => dash.state.sessionId != null, "session");

    const select = root.querySelector("#plan-select") as HTMLSelectElement;
    await until(
      () => Array.from(select.options).some((o) => o.value === "long-sleeve-top"),
      "plan listed",
    );
    select.value = "long-sleeve-top";
    button(root, "Replicate Plan").click();
    await until(() => dash.state.planClass === "long-sleeve-top", "plan attached");

    const panel = root.querySelector("#intervention") as HTMLElement;
    expect(panel.hidden).toBe(true);
    button(root, "Propose Action").click();
    await until(() => !panel.hidden, "intervention panel");

    expect(root.querySelector("#intervention-summary")!.textContent).toBe(
      "plan expects 6 nodes, garment has 4",
    );
    expect(root.querySelector("#expected-matrix")!.textContent!.split("\n")).toHaveLength(6);
    expect(root.querySelector("#actual-matrix")!.textContent!.split("\n")).toHaveLength(4);
    expect(dash.state.status).toContain("mismatch");
    expect(dash.state.pending).toBeNull();
  });

  it("silently refetches and retries once when another client staled the version", async () => {
    const sid = dash.state.sessionId!;
    // a second client mutates the session behind the dashboard's back
    const other = new FoldPlanClient(base);
    const doc = await other.getSession(sid);
    const g = await other.getGraph(sid);
    await other.patchNode(sid, 1, g.nodes[1].x + 2, g.nodes[1].y, doc.version);
    expect((await other.getSession(sid)).version).toBe(doc.version + 1);

    const n0 = dash.state.graph!.nodes[0];
    dragNode(dash, root, 0, n0.x, n0.y + 4);
    await until(() => dash.state.status.includes("moved"), "retried move");
    expect(dash.state.graph!.nodes[0].moved).toBe(true);
    // the refetch also reconciled the other client's change
    expect(dash.state.graph!.nodes[1].x).toBe(g.nodes[1].x + 2);
  });
});
