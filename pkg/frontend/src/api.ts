/* Typed client for the foldplan HTTP service. Every mutation carries the
 * session version in If-Match; the server answers 428 when it is missing
 * and 412 when it is stale. */

export interface GraphNode {
  id: number;
  x: number;
  y: number;
  kind: "endpoint" | "junction";
  moved: boolean;
}

export interface GraphEdge {
  a: number;
  b: number;
  length: number;
  polyline: [number, number][];
}

export interface GraphDoc {
  nodes: GraphNode[];
  edges: GraphEdge[];
  bbox: [number, number, number, number];
  dims: [number, number];
}

export interface TrajectoryDoc {
  pick: [number, number];
  mid: [number, number, number];
  place: [number, number];
}

export interface PendingDoc {
  step: number;
  pick_node: number;
  place_node: number;
  pick: [number, number];
  place: [number, number];
  mid_height: number;
  trajectory: TrajectoryDoc;
}

export interface FoldDoc {
  fold_line: { point: [number, number]; direction: [number, number] };
  moved_area: number;
  overlap_area: number;
  clipped_area: number;
  area: number;
}

export interface PlanSummary {
  class_label: string;
  length: number;
}

export interface SessionDoc {
  id: string;
  version: number;
  dims: [number, number];
  area: number;
  bbox: [number, number, number, number];
  class_label: string | null;
  plan: PlanSummary | null;
  pending: PendingDoc | null;
  executed: number;
  folds: FoldDoc[];
}

export interface CreateResponse {
  id: string;
  version: number;
  graph: GraphDoc;
}

export interface MutationResponse {
  version: number;
  [key: string]: unknown;
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
    public expected?: number[][],
    public actual?: number[][],
  ) {
    super(`${code}: ${detail}`);
  }
}

export class FoldPlanClient {
  constructor(public base: string) {}

  private async request(path: string, init?: RequestInit): Promise<any> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) {
      let body: any = {};
      try {
        body = await res.json();
      } catch {
        /* non-JSON error body */
      }
      throw new ServiceError(
        res.status,
        body.error ?? `http_${res.status}`,
        body.detail ?? res.statusText,
        body.expected,
        body.actual,
      );
    }
    return res.json();
  }

  private mutation(version: number, body?: unknown): RequestInit {
    return {
      method: "POST",
      headers: { "If-Match": String(version), "Content-Type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    };
  }

  createSession(png: Uint8Array | ArrayBuffer | Blob): Promise<CreateResponse> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "image/png" },
      body: png as BodyInit,
    });
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request(`/sessions/${id}`);
  }

  getGraph(id: string): Promise<GraphDoc> {
    return this.request(`/sessions/${id}/graph`);
  }

  maskUrl(id: string, version: number): string {
    return `${this.base}/sessions/${id}/mask.png?v=${version}`;
  }

  foldUrl(id: string, k: number, version: number): string {
    return `${this.base}/sessions/${id}/folds/${k}.png?v=${version}`;
  }

  patchNode(id: string, node: number, x: number, y: number, version: number) {
    return this.request(`/sessions/${id}/nodes/${node}`, {
      method: "PATCH",
      headers: { "If-Match": String(version), "Content-Type": "application/json" },
      body: JSON.stringify({ x, y }),
    }) as Promise<MutationResponse & { node: GraphNode; graph: GraphDoc }>;
  }

  attachClass(id: string, classLabel: string, version: number) {
    return this.request(`/sessions/${id}/plan`, this.mutation(version, { class: classLabel })) as Promise<
      MutationResponse & { plan: PlanSummary }
    >;
  }

  newPlan(id: string, classLabel: string, version: number) {
    return this.request(`/sessions/${id}/plan`, this.mutation(version, { new: classLabel })) as Promise<
      MutationResponse & { plan: PlanSummary }
    >;
  }

  addAction(id: string, pick: number, place: number, midHeight: number, version: number) {
    return this.request(
      `/sessions/${id}/plan`,
      this.mutation(version, { add_action: { pick, place, mid_height: midHeight } }),
    ) as Promise<MutationResponse & { plan: PlanSummary }>;
  }

  savePlan(id: string, version: number) {
    return this.request(`/sessions/${id}/plan`, this.mutation(version, { save: true })) as Promise<
      MutationResponse & { plan: PlanSummary }
    >;
  }

  propose(id: string, step: number, version: number) {
    return this.request(`/sessions/${id}/propose`, this.mutation(version, { step })) as Promise<
      MutationResponse & { pending: PendingDoc }
    >;
  }

  accept(id: string, version: number) {
    return this.request(`/sessions/${id}/accept`, this.mutation(version)) as Promise<
      MutationResponse & { executed: number; fold: FoldDoc; graph: GraphDoc }
    >;
  }

  reset(id: string, version: number) {
    return this.request(`/sessions/${id}/reset`, this.mutation(version)) as Promise<MutationResponse>;
  }

  listPlans(): Promise<{ plans: PlanSummary[] }> {
    return this.request("/plans");
  }

  getPlan(classLabel: string): Promise<object> {
    return this.request(`/plans/${classLabel}`);
  }

  putPlan(doc: object): Promise<PlanSummary> {
    return this.request("/plans", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
  }
}
