/* The dashboard: mask + skeleton overlay, draggable node handles, the four
 * action buttons, plan management, fold preview strip, and the mismatch
 * intervention panel. All server interaction goes through FoldPlanClient. */

import {
  FoldPlanClient,
  GraphDoc,
  PendingDoc,
  PlanSummary,
  ServiceError,
  SessionDoc,
} from "./api.js";
import { adjacencyDiff, formatMatrix } from "./diff.js";
import { drawOverlay, HANDLE_RADIUS } from "./draw.js";

export interface ViewState {
  sessionId: string | null;
  version: number;
  graph: GraphDoc | null;
  pick: number | null;
  place: number | null;
  height: number;
  pending: PendingDoc | null;
  planClass: string | null;
  planLength: number;
  plans: PlanSummary[];
  folds: number;
  nextStep: number;
  status: string;
}

interface DragState {
  id: number;
  origX: number;
  origY: number;
  moved: boolean;
}

export interface DashboardOptions {
  /** Background session polling interval; 0 disables (used by tests). */
  pollMs?: number;
}

const TEMPLATE = `
  <div class="toolbar">
    <input type="file" id="upload" accept="image/png" />
    <label>class <input type="text" id="class-label" value="garment" size="14" /></label>
    <label>saved plans <select id="plan-select"></select></label>
    <button id="replicate-btn">Replicate Plan</button>
  </div>
  <div class="stage">
    <img id="mask" alt="garment mask" />
    <canvas id="overlay" width="320" height="240"></canvas>
  </div>
  <div class="controls">
    <label>height <input type="range" id="height" min="1" max="400" step="1" value="40" />
      <span id="height-value">40</span> px</label>
    <span id="selection">pick: - place: -</span>
  </div>
  <div class="buttons">
    <button id="propose-btn">Propose Action</button>
    <button id="send-btn">Send Action to Robot</button>
    <button id="reset-btn">Reset Action</button>
    <button id="add-btn">Add Action to Plan</button>
    <button id="save-btn">Save Plan</button>
  </div>
  <div id="plan-panel">no plan attached</div>
  <div id="pending-card">no pending action</div>
  <div id="folds"></div>
  <div id="status"></div>
  <div id="intervention" hidden>
    <h3>Representation mismatch</h3>
    <p id="intervention-summary"></p>
    <div class="matrices">
      <div><h4>plan expects</h4><pre id="expected-matrix"></pre></div>
      <div><h4>garment has</h4><pre id="actual-matrix"></pre></div>
    </div>
    <p id="intervention-note">The saved plan cannot replicate onto this garment.
      Select pick and place nodes and define the actions manually.</p>
  </div>
`;

export class Dashboard {
  state: ViewState = {
    sessionId: null,
    version: 0,
    graph: null,
    pick: null,
    place: null,
    height: 40,
    pending: null,
    planClass: null,
    planLength: 0,
    plans: [],
    folds: 0,
    nextStep: 0,
    status: "",
  };

  private drag: DragState | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;
  private canvas: HTMLCanvasElement;
  private mask: HTMLImageElement;
  private els: Record<string, HTMLElement>;

  constructor(
    private root: HTMLElement,
    public client: FoldPlanClient,
    opts: DashboardOptions = {},
  ) {
    root.innerHTML = TEMPLATE;
    this.canvas = root.querySelector("#overlay") as HTMLCanvasElement;
    this.mask = root.querySelector("#mask") as HTMLImageElement;
    this.els = {};
    for (const id of [
      "upload",
      "class-label",
      "plan-select",
      "replicate-btn",
      "height",
      "height-value",
      "selection",
      "propose-btn",
      "send-btn",
      "reset-btn",
      "add-btn",
      "save-btn",
      "plan-panel",
      "pending-card",
      "folds",
      "status",
      "intervention",
      "intervention-summary",
      "expected-matrix",
      "actual-matrix",
    ]) {
      this.els[id] = root.querySelector(`#${id}`) as HTMLElement;
    }
    this.wire();
    this.refreshPlans().catch(() => {});
    const pollMs = opts.pollMs ?? 1000;
    if (pollMs > 0) {
      this.timer = setInterval(() => this.reconcile().catch(() => {}), pollMs);
    }
    this.render();
  }

  dispose(): void {
    if (this.timer) clearInterval(this.timer);
  }

  private wire(): void {
    const upload = this.els["upload"] as HTMLInputElement;
    upload.addEventListener("change", () => {
      const file = upload.files && upload.files[0];
      if (file) void this.upload(file);
    });
    const height = this.els["height"] as HTMLInputElement;
    height.addEventListener("input", () => {
      this.state.height = Math.max(1, Number(height.value) || 1);
      this.render();
    });
    this.canvas.addEventListener("mousedown", (e) => this.onDown(e as MouseEvent));
    this.canvas.addEventListener("mousemove", (e) => this.onMove(e as MouseEvent));
    this.canvas.addEventListener("mouseup", (e) => void this.onUp(e as MouseEvent));
    this.els["propose-btn"].addEventListener("click", () => void this.propose());
    this.els["send-btn"].addEventListener("click", () => void this.send());
    this.els["reset-btn"].addEventListener("click", () => void this.resetAction());
    this.els["add-btn"].addEventListener("click", () => void this.addAction());
    this.els["save-btn"].addEventListener("click", () => void this.savePlan());
    this.els["replicate-btn"].addEventListener("click", () => void this.replicate());
  }

  /* ------------------------------------------------------------------ */
  /* server interaction                                                  */
  /* ------------------------------------------------------------------ */

  /** Run a mutation with the current version; on 412 refetch once and retry. */
  private async mutate<T extends { version: number }>(fn: (version: number) => Promise<T>): Promise<T> {
    try {
      const r = await fn(this.state.version);
      this.state.version = r.version;
      return r;
    } catch (e) {
      if (e instanceof ServiceError && e.status === 412 && this.state.sessionId) {
        const doc = await this.client.getSession(this.state.sessionId);
        this.applySession(doc);
        this.state.graph = await this.client.getGraph(this.state.sessionId);
        const r = await fn(this.state.version);
        this.state.version = r.version;
        return r;
      }
      throw e;
    }
  }

  private applySession(doc: SessionDoc): void {
    this.state.version = doc.version;
    this.state.planClass = doc.plan ? doc.plan.class_label : null;
    this.state.planLength = doc.plan ? doc.plan.length : 0;
    this.state.pending = doc.pending;
    this.state.folds = doc.executed;
  }

  async upload(file: File): Promise<void> {
    try {
      const bytes = await readFileBytes(file);
      const r = await this.client.createSession(bytes);
      this.state = {
        ...this.state,
        sessionId: r.id,
        version: r.version,
        graph: r.graph,
        pick: null,
        place: null,
        pending: null,
        planClass: null,
        planLength: 0,
        folds: 0,
        nextStep: 0,
        status: `session ${r.id}: ${r.graph.nodes.length} nodes`,
      };
      this.canvas.width = r.graph.dims[0];
      this.canvas.height = r.graph.dims[1];
      const slider = this.els["height"] as HTMLInputElement;
      slider.max = String(Math.ceil(Math.hypot(r.graph.dims[0], r.graph.dims[1])));
      this.mask.src = this.client.maskUrl(r.id, r.version);
      this.rebuildFolds();
      this.hideIntervention();
      await this.refreshPlans();
    } catch (e) {
      this.state.status = describe(e);
    }
    this.render();
  }

  async refreshPlans(): Promise<void> {
    const { plans } = await this.client.listPlans();
    this.state.plans = plans;
    const select = this.els["plan-select"] as HTMLSelectElement;
    const current = select.value;
    select.innerHTML = "";
    for (const p of plans) {
      const opt = document.createElement("option");
      opt.value = p.class_label;
      opt.textContent = `${p.class_label} (${p.length})`;
      select.appendChild(opt);
    }
    if (plans.some((p) => p.class_label === current)) select.value = current;
  }

  async propose(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid || !this.state.planClass) return;
    try {
      const r = await this.mutate((v) => this.client.propose(sid, this.state.nextStep, v));
      this.state.pending = r.pending;
      this.hideIntervention();
      this.state.status =
        `proposed step ${r.pending.step}: node ${r.pending.pick_node} -> ` +
        `node ${r.pending.place_node} at height ${r.pending.mid_height.toFixed(1)}`;
    } catch (e) {
      if (e instanceof ServiceError && e.code === "representation_mismatch") {
        this.showIntervention(e);
        this.state.status = "representation mismatch: manual plan definition required";
      } else if (e instanceof ServiceError && e.code === "step_out_of_range") {
        this.state.status = "plan has no further steps";
      } else {
        this.state.status = describe(e);
      }
    }
    this.render();
  }

  async send(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid || !this.state.pending) return;
    try {
      const r = await this.mutate((v) => this.client.accept(sid, v));
      this.state.pending = null;
      this.state.graph = r.graph; // server re-extracts after the fold
      this.state.folds = r.executed;
      this.state.nextStep += 1;
      this.state.pick = null;
      this.state.place = null;
      this.appendFold(r.executed - 1);
      this.state.status = `fold ${r.executed} executed, area ${r.fold.area}`;
    } catch (e) {
      this.state.status = describe(e);
    }
    this.render();
  }

  async resetAction(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid || !this.state.pending) return;
    try {
      await this.mutate((v) => this.client.reset(sid, v));
      this.state.pending = null;
      this.state.status = "pending action reset";
    } catch (e) {
      this.state.status = describe(e);
    }
    this.render();
  }

  async addAction(): Promise<void> {
    const sid = this.state.sessionId;
    const { pick, place } = this.state;
    if (!sid || pick == null || place == null || pick === place) return;
    try {
      if (!this.state.planClass) {
        const label = (this.els["class-label"] as HTMLInputElement).value.trim() || "garment";
        const r0 = await this.mutate((v) => this.client.newPlan(sid, label, v));
        this.state.planClass = r0.plan.class_label;
        this.state.planLength = r0.plan.length;
        this.state.nextStep = 0;
      }
      const r = await this.mutate((v) =>
        this.client.addAction(sid, pick, place, this.state.height, v),
      );
      this.state.planLength = r.plan.length;
      this.state.pick = null;
      this.state.place = null;
      this.state.status = `action ${r.plan.length} added to plan`;
    } catch (e) {
      this.state.status = describe(e);
    }
    this.render();
  }

  async savePlan(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid || !this.state.planClass) return;
    try {
      const r = await this.mutate((v) => this.client.savePlan(sid, v));
      this.state.status = `plan "${r.plan.class_label}" saved (${r.plan.length} actions)`;
      await this.refreshPlans();
    } catch (e) {
      this.state.status = describe(e);
    }
    this.render();
  }

  async replicate(): Promise<void> {
    const sid = this.state.sessionId;
    const label = (this.els["plan-select"] as HTMLSelectElement).value;
    if (!sid || !label) return;
    try {
      const r = await this.mutate((v) => this.client.attachClass(sid, label, v));
      this.state.planClass = r.plan.class_label;
      this.state.planLength = r.plan.length;
      this.state.nextStep = 0;
      this.state.pending = null; // attaching clears any pending action
      this.state.status = `plan "${r.plan.class_label}" attached (${r.plan.length} actions)`;
    } catch (e) {
      this.state.status = describe(e);
    }
    this.render();
  }

  private async reconcile(): Promise<void> {
    const sid = this.state.sessionId;
    if (!sid) return;
    const doc = await this.client.getSession(sid);
    if (doc.version !== this.state.version) {
      this.applySession(doc);
      this.state.graph = await this.client.getGraph(sid);
      this.rebuildFolds();
      this.render();
    }
  }

  /* ------------------------------------------------------------------ */
  /* canvas interaction                                                  */
  /* ------------------------------------------------------------------ */

  private toImage(e: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    const sx = rect.width > 0 ? this.canvas.width / rect.width : 1;
    const sy = rect.height > 0 ? this.canvas.height / rect.height : 1;
    return {
      x: Math.round((e.clientX - rect.left) * sx),
      y: Math.round((e.clientY - rect.top) * sy),
    };
  }

  private hitNode(x: number, y: number): number | null {
    if (!this.state.graph) return null;
    let best: number | null = null;
    let bestDist = HANDLE_RADIUS + 4;
    for (const n of this.state.graph.nodes) {
      const d = Math.hypot(n.x - x, n.y - y);
      if (d <= bestDist) {
        best = n.id;
        bestDist = d;
      }
    }
    return best;
  }

  private onDown(e: MouseEvent): void {
    if (!this.state.graph) return;
    const p = this.toImage(e);
    const hit = this.hitNode(p.x, p.y);
    if (hit == null) {
      this.state.pick = null;
      this.state.place = null;
      this.render();
      return;
    }
    const node = this.state.graph.nodes.find((n) => n.id === hit)!;
    this.drag = { id: hit, origX: node.x, origY: node.y, moved: false };
  }

  private onMove(e: MouseEvent): void {
    if (!this.drag || !this.state.graph) return;
    const p = this.toImage(e);
    if (Math.hypot(p.x - this.drag.origX, p.y - this.drag.origY) > 2) this.drag.moved = true;
    if (this.drag.moved) {
      const node = this.state.graph.nodes.find((n) => n.id === this.drag!.id)!;
      node.x = p.x;
      node.y = p.y;
      this.render();
    }
  }

  private async onUp(e: MouseEvent): Promise<void> {
    const drag = this.drag;
    this.drag = null;
    if (!drag || !this.state.graph) return;
    const p = this.toImage(e);
    if (!drag.moved) {
      this.select(drag.id);
      this.render();
      return;
    }
    await this.dropNode(drag, p.x, p.y);
  }

  private select(id: number): void {
    const s = this.state;
    if (s.pick === id) {
      s.pick = null;
    } else if (s.place === id) {
      s.place = null;
    } else if (s.pick == null) {
      s.pick = id;
    } else {
      s.place = id;
      const a = s.graph!.nodes.find((n) => n.id === s.pick);
      const b = s.graph!.nodes.find((n) => n.id === id);
      if (a && b) {
        // default trajectory height: half the pick-place distance
        s.height = Math.max(1, Math.round(Math.hypot(a.x - b.x, a.y - b.y) / 2));
        (this.els["height"] as HTMLInputElement).value = String(s.height);
      }
    }
  }

  private async dropNode(drag: DragState, x: number, y: number): Promise<void> {
    const sid = this.state.sessionId!;
    try {
      const r = await this.mutate((v) => this.client.patchNode(sid, drag.id, x, y, v));
      this.state.graph = r.graph; // snap to server-confirmed coordinates
      this.state.status = `node ${drag.id} moved to (${r.node.x}, ${r.node.y})`;
    } catch (e) {
      const node = this.state.graph!.nodes.find((n) => n.id === drag.id)!;
      node.x = drag.origX;
      node.y = drag.origY;
      if (e instanceof ServiceError && e.code === "off_garment") {
        this.state.status = `drop at (${x}, ${y}) is off the garment: node ${drag.id} reverted`;
      } else {
        this.state.status = describe(e);
      }
    }
    this.render();
  }

  /* ------------------------------------------------------------------ */
  /* rendering                                                           */
  /* ------------------------------------------------------------------ */

  private showIntervention(err: ServiceError): void {
    const expected = err.expected ?? [];
    const actual = err.actual ?? [];
    const d = adjacencyDiff(expected, actual);
    this.els["intervention-summary"].textContent = d.summary;
    this.els["expected-matrix"].textContent = formatMatrix(expected);
    this.els["actual-matrix"].textContent = formatMatrix(actual);
    this.els["intervention"].hidden = false;
  }

  private hideIntervention(): void {
    this.els["intervention"].hidden = true;
  }

  private appendFold(k: number): void {
    const sid = this.state.sessionId!;
    const img = document.createElement("img");
    img.className = "fold-preview";
    img.alt = `fold ${k + 1}`;
    img.src = this.client.foldUrl(sid, k, this.state.version);
    this.els["folds"].appendChild(img);
  }

  private rebuildFolds(): void {
    this.els["folds"].innerHTML = "";
    for (let k = 0; k < this.state.folds; k++) this.appendFold(k);
  }

  render(): void {
    const s = this.state;
    this.els["plan-panel"].textContent = s.planClass
      ? `${s.planClass}: ${s.planLength} action${s.planLength === 1 ? "" : "s"} in plan`
      : "no plan attached";
    this.els["pending-card"].textContent = s.pending
      ? `step ${s.pending.step}: pick node ${s.pending.pick_node} (${s.pending.pick[0]}, ` +
        `${s.pending.pick[1]}) -> place node ${s.pending.place_node} (${s.pending.place[0]}, ` +
        `${s.pending.place[1]}) at height ${s.pending.mid_height.toFixed(1)}`
      : "no pending action";
    this.els["selection"].textContent = `pick: ${s.pick ?? "-"} place: ${s.place ?? "-"}`;
    this.els["height-value"].textContent = String(s.height);
    this.els["status"].textContent = s.status;

    const gate = (id: string, enabled: boolean) => {
      (this.els[id] as HTMLButtonElement).disabled = !enabled;
    };
    gate("propose-btn", !!(s.sessionId && s.planClass && s.nextStep < s.planLength));
    gate("send-btn", !!s.pending);
    gate("reset-btn", !!s.pending);
    gate("add-btn", !!(s.sessionId && s.pick != null && s.place != null && s.pick !== s.place));
    gate("save-btn", !!(s.sessionId && s.planClass && s.planLength > 0));
    gate(
      "replicate-btn",
      !!(s.sessionId && (this.els["plan-select"] as HTMLSelectElement).value),
    );

    drawOverlay(this.canvas, {
      graph: s.graph,
      pick: s.pick,
      place: s.place,
      height: s.height,
      pending: s.pending,
    });
  }
}

function describe(e: unknown): string {
  if (e instanceof ServiceError) return `${e.code}: ${e.detail}`;
  return String(e);
}

/** Blob.arrayBuffer with a FileReader fallback for older DOM implementations. */
function readFileBytes(file: File): Promise<Uint8Array> {
  if (typeof file.arrayBuffer === "function") {
    return file.arrayBuffer().then((buf) => new Uint8Array(buf));
  }
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(new Uint8Array(reader.result as ArrayBuffer));
    reader.onerror = () => reject(reader.error ?? new Error("file read failed"));
    reader.readAsArrayBuffer(file);
  });
}
