"""Topology-preserving thinning of a binary mask to a 1-px-wide skeleton.

Iterative boundary peeling: a pixel may be deleted only if it is *simple*
(removing it changes neither the 8-connected foreground components nor the
4-connected background components seen in its 3x3 neighborhood) and is not
a curve endpoint. Each pass runs four directional sub-iterations in the
fixed order N, S, E, W; within a sub-iteration, pixels are processed in
four checkerboard parity batches. Pixels in one batch are pairwise
non-adjacent, so deleting them together is exactly equivalent to deleting
them one by one, which keeps the per-deletion topology guarantee while
allowing vectorized updates.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyMask
from .raster import BinaryMask

# Neighbor bit order for the 3x3 code: (dy, dx), bit k set when that
# neighbor is foreground.
_OFFSETS = (
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)
_FOUR_NEIGHBORS = {(-1, 0), (0, -1), (0, 1), (1, 0)}


class SkeletonMask(BinaryMask):
    """Binary mask holding a thinned skeleton (subset of its source mask)."""


def _ring_components(cells: list[tuple[int, int]], diagonal: bool) -> list[set]:
    """Connected components among 3x3-ring cells, 8- or 4-adjacency."""
    comps: list[set] = []
    remaining = set(cells)
    while remaining:
        seed = remaining.pop()
        comp = {seed}
        frontier = [seed]
        while frontier:
            cy, cx = frontier.pop()
            for oy, ox in list(remaining):
                dy, dx = abs(cy - oy), abs(cx - ox)
                adjacent = max(dy, dx) == 1 if diagonal else dy + dx == 1
                if adjacent:
                    remaining.discard((oy, ox))
                    comp.add((oy, ox))
                    frontier.append((oy, ox))
        comps.append(comp)
    return comps


def _build_luts() -> tuple[np.ndarray, np.ndarray]:
    simple = np.zeros(256, dtype=bool)
    ncount = np.zeros(256, dtype=np.uint8)
    for code in range(256):
        fg = [_OFFSETS[k] for k in range(8) if code >> k & 1]
        bg = [_OFFSETS[k] for k in range(8) if not code >> k & 1]
        ncount[code] = len(fg)
        t8 = len(_ring_components(fg, diagonal=True))
        bg4 = [c for c in _ring_components(bg, diagonal=False) if set(c) & _FOUR_NEIGHBORS]
        simple[code] = t8 == 1 and len(bg4) == 1
    return simple, ncount


_SIMPLE_LUT, _NCOUNT_LUT = _build_luts()

# Sub-iteration order: each deletes pixels whose neighbor in that direction
# is background (N, S, E, W boundary pixels respectively).
_DIRECTIONS = ((-1, 0), (1, 0), (0, 1), (0, -1))
_PARITIES = ((0, 0), (0, 1), (1, 0), (1, 1))


def _neighbor_codes(bits: np.ndarray) -> np.ndarray:
    h, w = bits.shape
    padded = np.pad(bits, 1)
    codes = np.zeros((h, w), dtype=np.uint8)
    for k, (dy, dx) in enumerate(_OFFSETS):
        codes |= padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w].astype(np.uint8) << k
    return codes


def neighbor_counts(bits: np.ndarray) -> np.ndarray:
    """Number of set 8-neighbors per pixel (for set pixels and background alike)."""
    h, w = bits.shape
    padded = np.pad(bits, 1)
    counts = np.zeros((h, w), dtype=np.uint8)
    for dy, dx in _OFFSETS:
        counts += padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
    return counts


def thin(mask: BinaryMask) -> SkeletonMask:
    """Peel the mask down to a 1-px skeleton with unchanged topology."""
    if not mask.bits.any():
        raise EmptyMask("cannot thin an empty mask")
    bits = mask.bits.copy()
    h, w = bits.shape
    yy, xx = np.mgrid[0:h, 0:w]
    parity_grids = {(py, px): (yy % 2 == py) & (xx % 2 == px) for py, px in _PARITIES}

    padded = np.pad(bits, 1)
    while True:
        changed = False
        for dy, dx in _DIRECTIONS:
            # Candidates freeze at sub-iteration start so the boundary
            # recedes at most one pixel per direction per pass; otherwise
            # batches cascade inward and strand comb-tooth endpoints.
            candidates = bits & ~padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
            for parity in _PARITIES:
                codes = _neighbor_codes(bits)
                doomed = (
                    candidates
                    & bits
                    & _SIMPLE_LUT[codes]
                    & (_NCOUNT_LUT[codes] != 1)
                    & parity_grids[parity]
                )
                if doomed.any():
                    bits[doomed] = False
                    padded[1:-1, 1:-1] = bits
                    changed = True
        if not changed:
            break
    return SkeletonMask(bits)
