/* Canvas overlay rendering: skeleton edges, draggable node handles, and the
 * pick -> mid -> place trajectory arc. Image coordinates map 1:1 onto the
 * canvas backing store; CSS may scale the element. */

import { GraphDoc, PendingDoc } from "./api.js";

export const PICK_COLOR = "#9cd2f7"; // light blue
export const PLACE_COLOR = "#155fd4"; // blue
export const NEUTRAL_COLOR = "#d0d0d0";
export const HANDLE_RADIUS = 6;

export interface OverlayScene {
  graph: GraphDoc | null;
  pick: number | null;
  place: number | null;
  height: number;
  pending: PendingDoc | null;
}

const contexts = new WeakMap<HTMLCanvasElement, CanvasRenderingContext2D | null>();

function context2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  if (!contexts.has(canvas)) {
    let ctx: CanvasRenderingContext2D | null = null;
    try {
      ctx = canvas.getContext("2d");
    } catch {
      ctx = null; // headless DOM without canvas support
    }
    contexts.set(canvas, ctx);
  }
  return contexts.get(canvas) ?? null;
}

export function drawOverlay(canvas: HTMLCanvasElement, scene: OverlayScene): void {
  const ctx = context2d(canvas);
  if (!ctx) return;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!scene.graph) {
    ctx.fillStyle = "#888";
    ctx.font = "14px sans-serif";
    ctx.fillText("upload a garment image", 12, 24);
    return;
  }

  ctx.strokeStyle = "#9a9a9a";
  ctx.lineWidth = 1.5;
  for (const e of scene.graph.edges) {
    ctx.beginPath();
    e.polyline.forEach(([x, y], i) => (i === 0 ? ctx!.moveTo(x, y) : ctx!.lineTo(x, y)));
    ctx.stroke();
  }

  const arc = trajectoryArc(scene);
  if (arc) {
    ctx.strokeStyle = "#e0a030";
    ctx.lineWidth = 2;
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(arc.from[0], arc.from[1]);
    ctx.quadraticCurveTo(arc.control[0], arc.control[1], arc.to[0], arc.to[1]);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "#e0a030";
    ctx.beginPath();
    ctx.arc(arc.mid[0], arc.mid[1], 4, 0, Math.PI * 2);
    ctx.fill();
  }

  for (const n of scene.graph.nodes) {
    const color = n.id === scene.pick ? PICK_COLOR : n.id === scene.place ? PLACE_COLOR : NEUTRAL_COLOR;
    ctx.beginPath();
    ctx.arc(n.x, n.y, HANDLE_RADIUS, 0, Math.PI * 2);
    ctx.fillStyle = color;
    ctx.fill();
    ctx.strokeStyle = n.moved ? "#d0404a" : "#555";
    ctx.lineWidth = n.kind === "junction" ? 2 : 1;
    ctx.stroke();
    ctx.fillStyle = "#333";
    ctx.font = "10px sans-serif";
    ctx.fillText(String(n.id), n.x + HANDLE_RADIUS + 2, n.y + 3);
  }
}

export interface Arc {
  from: [number, number];
  to: [number, number];
  control: [number, number];
  mid: [number, number];
}

/* The visual arc lifts the midpoint by the slider height perpendicular to
 * the pick-place segment (toward smaller y so it reads as "up"). */
export function trajectoryArc(scene: OverlayScene): Arc | null {
  let from: [number, number] | null = null;
  let to: [number, number] | null = null;
  let height = scene.height;
  if (scene.pending) {
    from = scene.pending.pick;
    to = scene.pending.place;
    height = scene.pending.mid_height;
  } else if (scene.graph && scene.pick != null && scene.place != null) {
    const a = scene.graph.nodes.find((n) => n.id === scene.pick);
    const b = scene.graph.nodes.find((n) => n.id === scene.place);
    if (!a || !b) return null;
    from = [a.x, a.y];
    to = [b.x, b.y];
  }
  if (!from || !to) return null;
  const dx = to[0] - from[0];
  const dy = to[1] - from[1];
  const len = Math.hypot(dx, dy) || 1;
  let px = -dy / len;
  let py = dx / len;
  if (py > 0) {
    px = -px;
    py = -py;
  }
  // control point of a quadratic bezier sits 2x the sagitta above the chord
  const control: [number, number] = [
    (from[0] + to[0]) / 2 + px * 2 * height,
    (from[1] + to[1]) / 2 + py * 2 * height,
  ];
  const mid: [number, number] = [
    0.25 * from[0] + 0.5 * control[0] + 0.25 * to[0],
    0.25 * from[1] + 0.5 * control[1] + 0.25 * to[1],
  ];
  return { from, to, control, mid };
}
