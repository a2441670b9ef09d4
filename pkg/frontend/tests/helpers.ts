import { readFileSync } from "node:fs";
import { basename } from "node:path";
import { Dashboard } from "../src/app.js";

export async function until(cond: () => boolean, what = "condition", ms = 10000): Promise<void> {
  const t0 = Date.now();
  while (!cond()) {
    if (Date.now() - t0 > ms) throw new Error(`timed out waiting for ${what}`);
    await new Promise((r) => setTimeout(r, 25));
  }
}

export function uploadFixture(root: HTMLElement, path: string): void {
  const bytes = readFileSync(path);
  const file = new File([bytes], basename(path), { type: "image/png" });
  const input = root.querySelector("#upload") as HTMLInputElement;
  Object.defineProperty(input, "files", { value: [file], configurable: true });
  input.dispatchEvent(new Event("change", { bubbles: true }));
}

export function mouse(el: Element, type: string, x: number, y: number): void {
  el.dispatchEvent(new MouseEvent(type, { clientX: x, clientY: y, bubbles: true }));
}

function overlay(root: HTMLElement): HTMLCanvasElement {
  return root.querySelector("#overlay") as HTMLCanvasElement;
}

/** Click a node handle: press and release without crossing the drag threshold. */
export function clickNode(dash: Dashboard, root: HTMLElement, id: number): void {
  const n = dash.state.graph!.nodes.find((n) => n.id === id)!;
  const c = overlay(root);
  mouse(c, "mousedown", n.x, n.y);
  mouse(c, "mouseup", n.x, n.y);
}

export function dragNode(dash: Dashboard, root: HTMLElement, id: number, tx: number, ty: number): void {
  const n = dash.state.graph!.nodes.find((n) => n.id === id)!;
  const c = overlay(root);
  mouse(c, "mousedown", n.x, n.y);
  mouse(c, "mousemove", Math.round((n.x + tx) / 2), Math.round((n.y + ty) / 2));
  mouse(c, "mousemove", tx, ty);
  mouse(c, "mouseup", tx, ty);
}

export function button(root: HTMLElement, label: string): HTMLButtonElement {
  const match = Array.from(root.querySelectorAll("button")).find(
    (b) => b.textContent === label,
  );
  if (!match) throw new Error(`no button labeled "${label}"`);
  return match as HTMLButtonElement;
}
