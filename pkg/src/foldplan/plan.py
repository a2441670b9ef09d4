"""Folding actions, plan documents, and plan replication.

A plan is recorded against a reference garment's graph. Replaying it on a
new garment first checks that the new graph's adjacency matrix (under
canonical node indexing) equals the reference adjacency; on a match,
canonical indices give the node correspondence directly. Pick and place
points carried by untouched nodes come from the new graph; points the user
dragged on the reference garment transfer as bounding-box fractions.
Trajectory apex heights rescale with the bbox diagonal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    MalformedDocument,
    NonPositiveHeight,
    RepresentationMismatch,
    SameNode,
    SchemaVersionUnsupported,
    StepOutOfRange,
    UnknownNode,
)
from .graph import SkeletonGraph, adjacency_matrix, graph_from_dict, graph_to_dict

PLAN_VERSION = 1


@dataclass(frozen=True)
class FoldingAction:
    pick: int
    place: int
    mid_height: float


@dataclass(frozen=True)
class Trajectory:
    """Pick, apex, place of one pick-and-place arc, in pixel coordinates."""

    pick: tuple[float, float]
    mid: tuple[float, float, float]  # (x, y, height)
    place: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "pick": [self.pick[0], self.pick[1]],
            "mid": [self.mid[0], self.mid[1], self.mid[2]],
            "place": [self.place[0], self.place[1]],
        }


@dataclass(frozen=True)
class ResolvedAction:
    """An action bound to concrete coordinates on a specific garment."""

    pick_node: int
    place_node: int
    pick: tuple[int, int]
    place: tuple[int, int]
    mid_height: float

    def trajectory(self) -> Trajectory:
        mx = (self.pick[0] + self.place[0]) / 2.0
        my = (self.pick[1] + self.place[1]) / 2.0
        return Trajectory(
            pick=(float(self.pick[0]), float(self.pick[1])),
            mid=(mx, my, self.mid_height),
            place=(float(self.place[0]), float(self.place[1])),
        )


@dataclass(frozen=True)
class FoldingPlan:
    class_label: str
    actions: tuple[FoldingAction, ...]
    reference_graph: SkeletonGraph
    version: int = PLAN_VERSION

    @property
    def reference_adjacency(self) -> np.ndarray:
        return adjacency_matrix(self.reference_graph)

    def __len__(self) -> int:
        return len(self.actions)


def default_mid_height(graph: SkeletonGraph, pick: int, place: int) -> float:
    """Half the pick-to-place distance; a comfortable unpinching arc."""
    p, q = graph.node(pick), graph.node(place)
    return 0.5 * math.hypot(q.x - p.x, q.y - p.y)


def define_action(
    graph: SkeletonGraph, pick: int, place: int, mid_height: float | None = None
) -> FoldingAction:
    if pick == place:
        raise SameNode(f"pick and place are both node {pick}")
    graph.node(pick)
    graph.node(place)
    if mid_height is None:
        mid_height = default_mid_height(graph, pick, place)
    if not mid_height > 0:
        raise NonPositiveHeight(f"mid_height must be positive, got {mid_height}")
    return FoldingAction(pick=int(pick), place=int(place), mid_height=float(mid_height))


def new_plan(class_label: str, graph: SkeletonGraph) -> FoldingPlan:
    return FoldingPlan(class_label=str(class_label), actions=(), reference_graph=graph)


def add_action(plan: FoldingPlan, action: FoldingAction) -> FoldingPlan:
    plan.reference_graph.node(action.pick)
    plan.reference_graph.node(action.place)
    return FoldingPlan(
        class_label=plan.class_label,
        actions=plan.actions + (action,),
        reference_graph=plan.reference_graph,
        version=plan.version,
    )


def match_representation(plan: FoldingPlan, graph: SkeletonGraph) -> None:
    """Raise RepresentationMismatch unless adjacency matrices are equal.

    A dimension mismatch is a mismatch, not a separate error.
    """
    expected = plan.reference_adjacency
    actual = adjacency_matrix(graph)
    if expected.shape != actual.shape or not np.array_equal(expected, actual):
        raise RepresentationMismatch(
            expected=expected.tolist(),
            actual=actual.tolist(),
            message="garment graph does not match the plan's reference structure",
        )


def _bbox_fraction(bbox, x: int, y: int) -> tuple[float, float]:
    x0, y0, x1, y1 = bbox
    fx = (x - x0) / (x1 - x0) if x1 > x0 else 0.0
    fy = (y - y0) / (y1 - y0) if y1 > y0 else 0.0
    return fx, fy


def _from_fraction(bbox, fx: float, fy: float) -> tuple[int, int]:
    x0, y0, x1, y1 = bbox
    return int(np.rint(x0 + fx * (x1 - x0))), int(np.rint(y0 + fy * (y1 - y0)))


def _transfer_point(plan: FoldingPlan, graph: SkeletonGraph, node_id: int) -> tuple[int, int]:
    ref_node = plan.reference_graph.node(node_id)
    if ref_node.moved:
        fx, fy = _bbox_fraction(plan.reference_graph.bbox, ref_node.x, ref_node.y)
        return _from_fraction(graph.bbox, fx, fy)
    node = graph.node(node_id)
    return (node.x, node.y)


def resolve_action(plan: FoldingPlan, graph: SkeletonGraph, step: int) -> ResolvedAction:
    """Bind plan step ``step`` to coordinates on ``graph``.

    Callers must have passed ``match_representation`` first (node indices
    are only meaningful under equal adjacency).
    """
    if not 0 <= step < len(plan.actions):
        raise StepOutOfRange(f"step {step} outside plan of {len(plan.actions)} actions")
    action = plan.actions[step]
    pick = _transfer_point(plan, graph, action.pick)
    place = _transfer_point(plan, graph, action.place)
    ref_diag = plan.reference_graph.bbox_diagonal()
    scale = graph.bbox_diagonal() / ref_diag if ref_diag > 0 else 1.0
    return ResolvedAction(
        pick_node=action.pick,
        place_node=action.place,
        pick=pick,
        place=place,
        mid_height=action.mid_height * scale,
    )


def resolve_plan(plan: FoldingPlan, graph: SkeletonGraph) -> list[ResolvedAction]:
    """Match the garment against the plan and bind every action."""
    match_representation(plan, graph)
    return [resolve_action(plan, graph, k) for k in range(len(plan.actions))]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def plan_to_dict(plan: FoldingPlan) -> dict:
    return {
        "version": plan.version,
        "class_label": plan.class_label,
        "actions": [
            {"pick": a.pick, "place": a.place, "mid_height": a.mid_height}
            for a in plan.actions
        ],
        "reference_graph": graph_to_dict(plan.reference_graph),
        "reference_adjacency": plan.reference_adjacency.tolist(),
    }


def plan_from_dict(doc: dict) -> FoldingPlan:
    try:
        version = int(doc["version"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad plan document: {exc}") from exc
    if version != PLAN_VERSION:
        raise SchemaVersionUnsupported(f"plan version {version} unsupported (expected {PLAN_VERSION})")
    try:
        graph = graph_from_dict(doc["reference_graph"])
        actions = tuple(
            FoldingAction(
                pick=int(a["pick"]), place=int(a["place"]), mid_height=float(a["mid_height"])
            )
            for a in doc["actions"]
        )
        class_label = str(doc["class_label"])
        stored_adj = doc["reference_adjacency"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad plan document: {exc}") from exc
    plan = FoldingPlan(class_label=class_label, actions=actions, reference_graph=graph, version=version)
    for a in actions:
        if not (0 <= a.pick < len(graph.nodes) and 0 <= a.place < len(graph.nodes)):
            raise MalformedDocument(f"action references node outside reference graph: {a}")
        if not a.mid_height > 0:
            raise MalformedDocument(f"action mid_height must be positive: {a}")
    if not np.array_equal(np.asarray(stored_adj, dtype=np.int_), plan.reference_adjacency):
        raise MalformedDocument("stored adjacency disagrees with reference graph")
    return plan


def plan_to_json(plan: FoldingPlan) -> str:
    return json.dumps(plan_to_dict(plan), separators=(",", ":"))


def plan_from_json(text: str) -> FoldingPlan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(str(exc)) from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("plan document must be a JSON object")
    return plan_from_dict(doc)


def save_plan(plan: FoldingPlan, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(plan_to_json(plan))
        f.write("\n")


def load_plan(path) -> FoldingPlan:
    with open(path, "r", encoding="utf-8") as f:
        return plan_from_json(f.read())
