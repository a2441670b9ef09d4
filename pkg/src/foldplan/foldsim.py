"""Planar fold simulation: reflect the picked side of the mask across the
perpendicular bisector of the pick-place segment.

This is the geometric stand-in for the robot. The fold line is the
perpendicular bisector of pick->place, so the reflection carries the pick
pixel exactly onto the place pixel. Sidedness and the reflection numerator
are integer dot products, so "on the line" is exact; only the final divide
and round introduce the usual half-pixel rasterization error. Cloth
thickness, layering, and slip are not modeled; trajectory height has no
effect on the outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFold, OffGarment
from .graph import extract_graph
from .plan import FoldingPlan, ResolvedAction, resolve_plan
from .raster import BinaryMask


@dataclass(frozen=True)
class FoldMap:
    """Coordinate transform of one executed fold.

    Points strictly on the pick side reflect across the fold line and round
    to the nearest pixel; everything else is unmoved. Composing maps in
    execution order carries original-garment coordinates onto the folded
    stack.
    """

    pick: tuple[int, int]
    place: tuple[int, int]

    def displacement(self) -> tuple[int, int]:
        return (self.pick[0] - self.place[0], self.pick[1] - self.place[1])

    def sidedness(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Integer side test: > 0 on the pick side, == 0 on the fold line."""
        ax, ay = self.pick
        bx, by = self.place
        dx, dy = ax - bx, ay - by
        return (2 * xs - ax - bx) * dx + (2 * ys - ay - by) * dy

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map an (n, 2) int array of (x, y) points through the fold."""
        pts = np.asarray(points, dtype=np.int_)
        xs, ys = pts[:, 0], pts[:, 1]
        ax, ay = self.pick
        bx, by = self.place
        dx, dy = ax - bx, ay - by
        dd = dx * dx + dy * dy
        s = self.sidedness(xs, ys)
        t = np.where(s > 0, s, 0) / dd
        out = np.stack([xs - t * dx, ys - t * dy], axis=1)
        return np.rint(out).astype(np.int_)

    def map_point(self, point: tuple[int, int]) -> tuple[int, int]:
        x, y = self.apply(np.array([point]))[0]
        return (int(x), int(y))


@dataclass(frozen=True)
class FoldResult:
    mask: BinaryMask
    fold_line: tuple[tuple[float, float], tuple[float, float]]  # (point, unit direction)
    moved_area: int
    overlap_area: int
    clipped_area: int
    fold_map: FoldMap = field(repr=False)

    def to_dict(self) -> dict:
        (px, py), (ux, uy) = self.fold_line
        return {
            "fold_line": {"point": [px, py], "direction": [ux, uy]},
            "moved_area": self.moved_area,
            "overlap_area": self.overlap_area,
            "clipped_area": self.clipped_area,
            "area": self.mask.area,
        }


def apply_fold(mask: BinaryMask, action: ResolvedAction) -> FoldResult:
    """Fold the mask by reflecting the pick side onto the place side.

    Reflections landing outside the canvas are clipped (and counted);
    landing on unmoved material merges layers into one.
    """
    pick, place = action.pick, action.place
    if tuple(pick) == tuple(place):
        raise DegenerateFold(f"pick and place coincide at {tuple(pick)}")
    if not mask.contains(pick[0], pick[1]):
        raise OffGarment(f"pick point {tuple(pick)} is not on the garment")

    fmap = FoldMap(pick=(int(pick[0]), int(pick[1])), place=(int(place[0]), int(place[1])))
    bits = mask.bits
    h, w = bits.shape
    ys, xs = np.nonzero(bits)
    s = fmap.sidedness(xs, ys)
    moving = s > 0

    stationary = np.zeros_like(bits)
    stationary[ys[~moving], xs[~moving]] = True

    ax, ay = fmap.pick
    bx, by = fmap.place
    dx, dy = ax - bx, ay - by
    dd = dx * dx + dy * dy
    t = s[moving] / dd
    lx = np.rint(xs[moving] - t * dx).astype(np.int_)
    ly = np.rint(ys[moving] - t * dy).astype(np.int_)
    inside = (lx >= 0) & (lx < w) & (ly >= 0) & (ly < h)

    landed = np.zeros_like(bits)
    landed[ly[inside], lx[inside]] = True

    norm = math.sqrt(dd)
    fold_line = (
        ((ax + bx) / 2.0, (ay + by) / 2.0),
        (-dy / norm, dx / norm),
    )
    return FoldResult(
        mask=BinaryMask(stationary | landed),
        fold_line=fold_line,
        moved_area=int(np.count_nonzero(moving)),
        overlap_area=int(np.count_nonzero(landed & stationary)),
        clipped_area=int(np.count_nonzero(~inside)),
        fold_map=fmap,
    )


def carry_forward(point: tuple[int, int], maps) -> tuple[int, int]:
    """Push an original-garment point through a sequence of fold maps."""
    p = (int(point[0]), int(point[1]))
    for fmap in maps:
        p = fmap.map_point(p)
    return p


def simulate_plan(
    mask: BinaryMask, plan: FoldingPlan, min_spur_len: float | None = None
) -> list[FoldResult]:
    """Execute every plan action on the mask, one fold per action.

    Actions resolve against the original garment's graph (the plan's node
    indices are only meaningful there); their coordinates are then carried
    through the accumulated fold maps before each execution.
    """
    g = extract_graph(mask, min_spur_len=min_spur_len)
    resolved = resolve_plan(plan, g)

    results: list[FoldResult] = []
    maps: list[FoldMap] = []
    current = mask
    for ra in resolved:
        bound = ResolvedAction(
            pick_node=ra.pick_node,
            place_node=ra.place_node,
            pick=carry_forward(ra.pick, maps),
            place=carry_forward(ra.place, maps),
            mid_height=ra.mid_height,
        )
        result = apply_fold(current, bound)
        results.append(result)
        maps.append(result.fold_map)
        current = result.mask
    return results
