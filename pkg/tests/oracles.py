"""Independent reference implementations used to check the package.

Everything here is deliberately naive: explicit flood fills, per-pixel
reflection, per-pixel degree census. The package must agree with these on
shared inputs; none of this code is imported by the package itself.
"""

from __future__ import annotations

from collections import deque

import numpy as np

_N8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_N4 = ((-1, 0), (0, -1), (0, 1), (1, 0))


def flood_components(bits: np.ndarray, connectivity: int) -> int:
    """Count connected components of True cells by BFS flood fill."""
    offsets = _N8 if connectivity == 8 else _N4
    h, w = bits.shape
    seen = np.zeros_like(bits, dtype=bool)
    count = 0
    for sy in range(h):
        for sx in range(w):
            if not bits[sy, sx] or seen[sy, sx]:
                continue
            count += 1
            seen[sy, sx] = True
            queue = deque([(sy, sx)])
            while queue:
                y, x = queue.popleft()
                for dy, dx in offsets:
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < h and 0 <= nx < w and bits[ny, nx] and not seen[ny, nx]:
                        seen[ny, nx] = True
                        queue.append((ny, nx))
    return count


def flood_holes(bits: np.ndarray) -> int:
    """Count 4-connected background regions not touching the border."""
    h, w = bits.shape
    bg = ~bits
    seen = np.zeros_like(bits, dtype=bool)

    def fill(sy, sx):
        seen[sy, sx] = True
        queue = deque([(sy, sx)])
        touches_border = False
        while queue:
            y, x = queue.popleft()
            if y in (0, h - 1) or x in (0, w - 1):
                touches_border = True
            for dy, dx in _N4:
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w and bg[ny, nx] and not seen[ny, nx]:
                    seen[ny, nx] = True
                    queue.append((ny, nx))
        return touches_border

    holes = 0
    for sy in range(h):
        for sx in range(w):
            if bg[sy, sx] and not seen[sy, sx]:
                if not fill(sy, sx):
                    holes += 1
    return holes


def degree_census(bits: np.ndarray) -> dict[tuple[int, int], int]:
    """(y, x) -> number of set 8-neighbors, for every set pixel."""
    h, w = bits.shape
    out = {}
    for y in range(h):
        for x in range(w):
            if not bits[y, x]:
                continue
            n = 0
            for dy, dx in _N8:
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w and bits[ny, nx]:
                    n += 1
            out[(y, x)] = n
    return out


def naive_fold(bits: np.ndarray, pick: tuple[int, int], place: tuple[int, int]) -> np.ndarray:
    """Reflect the pick side across the perpendicular bisector, one pixel
    at a time, union with the unmoved side, clip at the canvas."""
    h, w = bits.shape
    ax, ay = pick
    bx, by = place
    dx, dy = ax - bx, ay - by
    dd = dx * dx + dy * dy
    out = np.zeros_like(bits)
    for y in range(h):
        for x in range(w):
            if not bits[y, x]:
                continue
            s = (2 * x - ax - bx) * dx + (2 * y - ay - by) * dy
            if s <= 0:
                out[y, x] = True
                continue
            rx = int(np.rint(x - s * dx / dd))
            ry = int(np.rint(y - s * dy / dd))
            if 0 <= rx < w and 0 <= ry < h:
                out[ry, rx] = True
    return out


def random_blob(rng: np.random.Generator, size: int = 64) -> np.ndarray:
    """A random 8-connected blob: union of random disks, largest component."""
    h = w = size
    yy, xx = np.mgrid[0:h, 0:w]
    bits = np.zeros((h, w), dtype=bool)
    for _ in range(rng.integers(2, 7)):
        cy, cx = rng.integers(8, h - 8), rng.integers(8, w - 8)
        r = rng.integers(3, 11)
        bits |= (yy - cy) ** 2 + (xx - cx) ** 2 <= r * r
    # Occasionally punch a hole to exercise hole preservation.
    if rng.random() < 0.3:
        cy, cx = rng.integers(12, h - 12), rng.integers(12, w - 12)
        r = rng.integers(2, 5)
        bits &= (yy - cy) ** 2 + (xx - cx) ** 2 > r * r

    # Keep the largest 8-connected component only.
    h_, w_ = bits.shape
    seen = np.zeros_like(bits)
    best = None
    for sy in range(h_):
        for sx in range(w_):
            if not bits[sy, sx] or seen[sy, sx]:
                continue
            comp = [(sy, sx)]
            seen[sy, sx] = True
            queue = deque([(sy, sx)])
            while queue:
                y, x = queue.popleft()
                for dy, dx in _N8:
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < h_ and 0 <= nx < w_ and bits[ny, nx] and not seen[ny, nx]:
                        seen[ny, nx] = True
                        comp.append((ny, nx))
                        queue.append((ny, nx))
            if best is None or len(comp) > len(best):
                best = comp
    out = np.zeros_like(bits)
    if best:
        for y, x in best:
            out[y, x] = True
    return out
