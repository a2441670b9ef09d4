"""Synthetic garment silhouettes with known limb landmarks.

Garments are drawn as unions of thick strokes (capsules) along explicit
centerline segments, so the skeleton pipeline recovers a predictable graph
and the stroke endpoints double as ground-truth landmarks. Three classes,
chosen so their canonical adjacency matrices are pairwise distinct:

  trousers            waist stem into two staggered legs (4 nodes,
                      junction at canonical index 1)
  short-sleeve-top    two raised sleeves and a hem stem (4 nodes,
                      junction at canonical index 2)
  long-sleeve-top     collar, two hanging sleeves on separate junctions,
                      hem (6 nodes)

Tips are jittered per item; junction vertices stay pinned so the digital
medial axis keeps a single stable branch cluster. Scaling renders the base
raster and nearest-neighbor resamples it, which makes the 2x render
exactly the pixel-doubled 1x render for equal seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evalharness import GarmentItem, StepTruth
from .graph import extract_graph
from .plan import FoldingPlan, add_action, define_action, new_plan
from .raster import BinaryMask

SHORT_SLEEVE_TOP = "short-sleeve-top"
LONG_SLEEVE_TOP = "long-sleeve-top"
TROUSERS = "trousers"
CLASS_LABELS = (SHORT_SLEEVE_TOP, LONG_SLEEVE_TOP, TROUSERS)

BASE_CANVAS = (220, 260)  # (width, height)
STROKE_RADIUS = 7.0


@dataclass(frozen=True)
class SynthParams:
    garment_class: str
    scale: float = 1.0
    jitter: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.garment_class not in CLASS_LABELS:
            raise ValueError(f"unknown class {self.garment_class!r}")
        if not self.scale > 0:
            raise ValueError("scale must be > 0")
        if self.jitter < 0:
            raise ValueError("jitter must be >= 0")


@dataclass(frozen=True)
class _ClassGeometry:
    vertices: tuple[tuple[str, tuple[float, float]], ...]
    segments: tuple[tuple[str, str], ...]
    jittered: tuple[str, ...]
    # (pick vertex, place vertex) per plan action, in order.
    plan: tuple[tuple[str, str], ...]

    def degrees(self) -> dict[str, int]:
        deg = {name: 0 for name, _ in self.vertices}
        for a, b in self.segments:
            deg[a] += 1
            deg[b] += 1
        return deg


_GEOMETRY: dict[str, _ClassGeometry] = {
    TROUSERS: _ClassGeometry(
        vertices=(
            ("waist", (110.0, 40.0)),
            ("crotch", (110.0, 110.0)),
            ("left_leg", (65.0, 220.0)),
            ("right_leg", (160.0, 200.0)),
        ),
        segments=(("waist", "crotch"), ("crotch", "left_leg"), ("crotch", "right_leg")),
        jittered=("waist", "left_leg", "right_leg"),
        plan=(("left_leg", "waist"), ("right_leg", "waist")),
    ),
    SHORT_SLEEVE_TOP: _ClassGeometry(
        vertices=(
            ("left_sleeve", (40.0, 75.0)),
            ("right_sleeve", (180.0, 95.0)),
            ("chest", (110.0, 135.0)),
            ("hem", (110.0, 220.0)),
        ),
        segments=(("chest", "left_sleeve"), ("chest", "right_sleeve"), ("chest", "hem")),
        jittered=("left_sleeve", "right_sleeve", "hem"),
        plan=(("left_sleeve", "hem"), ("right_sleeve", "hem")),
    ),
    LONG_SLEEVE_TOP: _ClassGeometry(
        vertices=(
            ("collar", (110.0, 40.0)),
            ("yoke", (110.0, 85.0)),
            ("waistband", (110.0, 135.0)),
            ("left_sleeve", (35.0, 175.0)),
            ("right_sleeve", (185.0, 195.0)),
            ("hem", (110.0, 225.0)),
        ),
        segments=(
            ("collar", "yoke"),
            ("yoke", "left_sleeve"),
            ("yoke", "waistband"),
            ("waistband", "right_sleeve"),
            ("waistband", "hem"),
        ),
        jittered=("collar", "left_sleeve", "right_sleeve", "hem"),
        plan=(("left_sleeve", "hem"), ("right_sleeve", "hem"), ("collar", "hem")),
    ),
}


def _capsule_union(width: int, height: int, segments, radius: float) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width].astype(float)
    bits = np.zeros((height, width), dtype=bool)
    r2 = radius * radius
    for (ax, ay), (bx, by) in segments:
        dx, dy = bx - ax, by - ay
        seg2 = dx * dx + dy * dy
        if seg2 == 0:
            bits |= (xx - ax) ** 2 + (yy - ay) ** 2 <= r2
            continue
        t = np.clip(((xx - ax) * dx + (yy - ay) * dy) / seg2, 0.0, 1.0)
        bits |= (xx - (ax + t * dx)) ** 2 + (yy - (ay + t * dy)) ** 2 <= r2
    return bits


def nn_resample(bits: np.ndarray, scale: float) -> np.ndarray:
    """Nearest-neighbor rescale; integer factors are exact block replication."""
    if scale == 1.0:
        return bits.copy()
    h, w = bits.shape
    out_h, out_w = int(round(h * scale)), int(round(w * scale))
    rows = np.minimum((np.arange(out_h) / scale).astype(np.int_), h - 1)
    cols = np.minimum((np.arange(out_w) / scale).astype(np.int_), w - 1)
    return bits[np.ix_(rows, cols)]


def _jittered_vertices(params: SynthParams) -> dict[str, tuple[float, float]]:
    """Centerline vertices at base scale with per-item tip jitter applied."""
    geo = _GEOMETRY[params.garment_class]
    rng = np.random.default_rng(params.seed)
    jitter = {}
    for name in geo.jittered:
        jitter[name] = rng.uniform(-params.jitter, params.jitter, size=2)
    out = {}
    for name, (x, y) in geo.vertices:
        dx, dy = jitter.get(name, (0.0, 0.0))
        out[name] = (x + dx, y + dy)
    return out


def synth_landmarks(params: SynthParams) -> dict[str, tuple[float, float]]:
    """Jittered, scaled landmark positions; the construction ground truth.

    Limb tips sit at the stroke cap apex (vertex pushed outward by the
    stroke radius), which is where the garment fabric actually ends;
    junction landmarks are the centerline vertices themselves.
    """
    geo = _GEOMETRY[params.garment_class]
    degrees = geo.degrees()
    base = _jittered_vertices(params)
    out = {}
    for name, (x, y) in base.items():
        if degrees[name] == 1:
            (a, b) = next(s for s in geo.segments if name in s)
            other = base[b if a == name else a]
            ux, uy = x - other[0], y - other[1]
            norm = math.hypot(ux, uy) or 1.0
            x += STROKE_RADIUS * ux / norm
            y += STROKE_RADIUS * uy / norm
        out[name] = (x * params.scale, y * params.scale)
    return out


def synth_mask(params: SynthParams) -> BinaryMask:
    geo = _GEOMETRY[params.garment_class]
    base = _jittered_vertices(params)
    w, h = BASE_CANVAS
    segs = [(base[a], base[b]) for a, b in geo.segments]
    bits = _capsule_union(w, h, segs, STROKE_RADIUS)
    return BinaryMask(nn_resample(bits, params.scale))


def landmark_ranks(
    landmarks: dict[str, tuple[float, float]],
    degrees: dict[str, int],
    bbox: tuple[int, int, int, int],
) -> dict[str, int]:
    """Canonical index each landmark should receive after extraction.

    Uses the same (normalized y, normalized x, degree desc) key the graph
    module sorts by, against the rendered mask's bbox.
    """
    x0, y0, x1, y1 = bbox
    sx = (x1 - x0) or 1
    sy = (y1 - y0) or 1

    def key(name):
        x, y = landmarks[name]
        return ((y - y0) / sy, (x - x0) / sx, -degrees[name])

    ordered = sorted(landmarks, key=key)
    return {name: i for i, name in enumerate(ordered)}


def synth_garment(
    params: SynthParams,
    plan: FoldingPlan | None = None,
    name: str | None = None,
) -> GarmentItem:
    """Generate one garment item; with a plan, attach per-step ground truth."""
    geo = _GEOMETRY[params.garment_class]
    mask = synth_mask(params)
    landmarks = synth_landmarks(params)
    truth = None
    if plan is not None:
        ranks = landmark_ranks(landmarks, geo.degrees(), mask.bbox())
        by_rank = {i: landmarks[n] for n, i in ranks.items()}
        truth = tuple(
            StepTruth(pick=by_rank[a.pick], place=by_rank[a.place]) for a in plan.actions
        )
    return GarmentItem(
        class_label=params.garment_class,
        item_name=name or f"{params.garment_class}-{params.seed:03d}",
        image=mask,
        ground_truth=truth,
    )


def reference_plan(garment_class: str, seed: int = 0) -> FoldingPlan:
    """Define the class's folding plan on an unjittered reference garment.

    Actions use default mid heights. Raises RuntimeError if the extracted
    graph does not have the constructed node layout; that would mean the
    geometry drifted out of the pipeline's stable regime.
    """
    geo = _GEOMETRY[garment_class]
    params = SynthParams(garment_class=garment_class, seed=seed)
    mask = synth_mask(params)
    graph = extract_graph(mask)
    landmarks = synth_landmarks(params)
    degrees = geo.degrees()

    if len(graph.nodes) != len(landmarks):
        raise RuntimeError(
            f"{garment_class}: extracted {len(graph.nodes)} nodes, expected {len(landmarks)}"
        )
    ranks = landmark_ranks(landmarks, degrees, mask.bbox())
    for vertex, idx in ranks.items():
        node = graph.node(idx)
        lx, ly = landmarks[vertex]
        if math.hypot(node.x - lx, node.y - ly) > 2 * STROKE_RADIUS:
            raise RuntimeError(
                f"{garment_class}: node {idx} at {node.position} too far from "
                f"landmark {vertex} at ({lx:.1f}, {ly:.1f})"
            )
        if graph.degrees()[idx] != degrees[vertex]:
            raise RuntimeError(f"{garment_class}: degree mismatch at node {idx}")

    plan = new_plan(garment_class, graph)
    for pick_name, place_name in geo.plan:
        action = define_action(graph, ranks[pick_name], ranks[place_name])
        plan = add_action(plan, action)
    return plan


def synth_set(
    per_class: int = 5,
    jitter: float = 2.0,
    scale: float = 1.0,
    seed: int = 0,
) -> tuple[list[GarmentItem], dict[str, FoldingPlan]]:
    """Items plus per-class reference plans for an evaluation run."""
    plans = {label: reference_plan(label) for label in CLASS_LABELS}
    items = []
    for label in CLASS_LABELS:
        for i in range(per_class):
            params = SynthParams(
                garment_class=label, scale=scale, jitter=jitter, seed=seed + i
            )
            items.append(synth_garment(params, plan=plans[label], name=f"{label}-{seed + i:03d}"))
    return items, plans
