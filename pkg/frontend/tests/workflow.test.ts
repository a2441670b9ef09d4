/* Scripted full-loop test against a live service: upload, drag with revert,
 * define a 2-action plan through the named buttons, replicate it on a second
 * fixture, and watch both fold previews appear. */

import { afterAll, beforeAll, describe, expect, inject, it } from "vitest";
import { join } from "node:path";
import { FoldPlanClient } from "../src/api.js";
import { Dashboard } from "../src/app.js";
import { button, clickNode, dragNode, until, uploadFixture } from "./helpers.js";

const base = inject("base");
const corpus = inject("corpus");
const trousers = (name: string) => join(corpus, "items", "trousers", `${name}.png`);

describe("dashboard workflow", () => {
  let root: HTMLElement;
  let dash: Dashboard;

  beforeAll(() => {
    root = document.createElement("div");
    document.body.appendChild(root);
    dash = new Dashboard(root, new FoldPlanClient(base), { pollMs: 0 });
  });

  afterAll(() => {
    dash.dispose();
    root.remove();
  });

  it("uploads a fixture and shows its skeleton graph", async () => {
    uploadFixture(root, trousers("trousers-007"));
    await until(() => dash.state.sessionId != null, "session");
    expect(dash.state.graph!.nodes).toHaveLength(4);
    expect((root.querySelector("#mask") as HTMLImageElement).src).toContain("/mask.png");
    expect(button(root, "Propose Action").disabled).toBe(true);
    expect(button(root, "Send Action to Robot").disabled).toBe(true);
  });

  it("reverts a node dragged onto the background", async () => {
    const before = dash.state.graph!.nodes.map((n) => [n.x, n.y]);
    const version = dash.state.version;
    dragNode(dash, root, 0, 5, 5); // canvas corner, far off the garment
    await until(() => dash.state.status.includes("reverted"), "revert warning");
    expect(dash.state.graph!.nodes.map((n) => [n.x, n.y])).toEqual(before);
    expect(dash.state.version).toBe(version); // failed mutation does not bump
  });

  it("snaps a node dragged onto the garment to confirmed coordinates", async () => {
    const n0 = dash.state.graph!.nodes[0];
    const target = { x: n0.x, y: n0.y + 5 };
    const version = dash.state.version;
    dragNode(dash, root, 0, target.x, target.y);
    await until(() => dash.state.version === version + 1, "confirmed move");
    const moved = dash.state.graph!.nodes[0];
    expect([moved.x, moved.y]).toEqual([target.x, target.y]);
    expect(moved.moved).toBe(true);
  });

  it("defines a 2-action plan via the named buttons and saves it", async () => {
    (root.querySelector("#class-label") as HTMLInputElement).value = "trousers";

    clickNode(dash, root, 3); // left leg tip
    clickNode(dash, root, 0); // waist
    await until(() => dash.state.pick === 3 && dash.state.place === 0, "first selection");
    expect(button(root, "Add Action to Plan").disabled).toBe(false);
    button(root, "Add Action to Plan").click();
    await until(() => dash.state.planLength === 1, "first action");

    clickNode(dash, root, 2); // right leg tip
    clickNode(dash, root, 0);
    await until(() => dash.state.pick === 2 && dash.state.place === 0, "second selection");
    button(root, "Add Action to Plan").click();
    await until(() => dash.state.planLength === 2, "second action");
    expect(root.querySelector("#plan-panel")!.textContent).toContain("2 actions");

    button(root, "Save Plan").click();
    await until(() => dash.state.status.includes("saved"), "plan saved");
    await until(
      () =>
        Array.from(root.querySelectorAll("#plan-select option")).some(
          (o) => (o as HTMLOptionElement).value === "trousers",
        ),
      "plan listed",
    );
  });

  it("replicates the saved plan on a second fixture and runs both folds", async () => {
    const previous = dash.state.sessionId;
    uploadFixture(root, trousers("trousers-008"));
    await until(() => dash.state.sessionId !== previous && dash.state.sessionId != null, "new session");
    expect(root.querySelectorAll("#folds img")).toHaveLength(0);

    (root.querySelector("#plan-select") as HTMLSelectElement).value = "trousers";
    button(root, "Replicate Plan").click();
    await until(() => dash.state.planClass === "trousers", "plan attached");
    expect(dash.state.planLength).toBe(2);

    // step 0: propose, back off with Reset Action, then propose and send
    button(root, "Propose Action").click();
    await until(() => dash.state.pending != null, "first proposal");
    expect(root.querySelector("#pending-card")!.textContent).toContain("pick node 3");
    button(root, "Reset Action").click();
    await until(() => dash.state.pending == null, "proposal reset");
    expect(button(root, "Send Action to Robot").disabled).toBe(true);

    button(root, "Propose Action").click();
    await until(() => dash.state.pending != null, "second proposal");
    button(root, "Send Action to Robot").click();
    await until(() => dash.state.folds === 1, "first fold");

    // step 1
    button(root, "Propose Action").click();
    await until(() => dash.state.pending != null, "third proposal");
    button(root, "Send Action to Robot").click();
    await until(() => dash.state.folds === 2, "second fold");

    const previews = Array.from(root.querySelectorAll("#folds img")) as HTMLImageElement[];
    expect(previews).toHaveLength(2);
    for (const img of previews) {
      const res = await fetch(img.src);
      expect(res.status).toBe(200);
      const head = new Uint8Array(await res.arrayBuffer()).slice(0, 4);
      expect(Array.from(head)).toEqual([0x89, 0x50, 0x4e, 0x47]);
    }

    // plan exhausted: nothing further to propose
    expect(button(root, "Propose Action").disabled).toBe(true);
    expect(button(root, "Send Action to Robot").disabled).toBe(true);
  });
});
