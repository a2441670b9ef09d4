"""Image ingestion, background masking, and binary-mask topology helpers.

Conventions used throughout the package:

* arrays are row-major ``(height, width)`` and indexed ``[y, x]``;
* points are ``(x, y)`` pairs in pixel coordinates;
* foreground (garment) is 8-connected, background is 4-connected.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage

from .errors import EmptyMask, MalformedImage

# Structuring elements for scipy.ndimage.label.
_CONN8 = np.ones((3, 3), dtype=bool)
_CONN4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit RGB raster, shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3 or px.shape[0] < 1 or px.shape[1] < 1:
            raise MalformedImage(f"expected (h, w, 3) uint8 array, got shape {px.shape}")
        object.__setattr__(self, "pixels", _freeze(px))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Boolean occupancy raster; True marks garment pixels."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim != 2 or b.shape[0] < 1 or b.shape[1] < 1:
            raise MalformedImage(f"expected 2-d boolean array, got shape {b.shape}")
        object.__setattr__(self, "bits", _freeze(b))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def area(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    def bbox(self) -> tuple[int, int, int, int]:
        """Inclusive bounding box (x0, y0, x1, y1) of the set bits."""
        ys, xs = np.nonzero(self.bits)
        if ys.size == 0:
            raise EmptyMask("mask has no set bits")
        return int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())

    def bbox_diagonal(self) -> float:
        x0, y0, x1, y1 = self.bbox()
        return float(np.hypot(x1 - x0, y1 - y0))

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height and bool(self.bits[y, x])


@dataclass(frozen=True)
class MaskConfig:
    """Threshold-based background masking parameters.

    threshold_mode:
        'luminance'       foreground = pixels with Rec.601 luma >= threshold
        'chroma-distance' foreground = pixels whose RGB distance to the
                          sampled border background color exceeds threshold
    """

    threshold_mode: str = "luminance"
    threshold: float = 128.0
    keep_largest_component: bool = True
    fill_holes_below: int = 0

    def __post_init__(self):
        if self.threshold_mode not in ("luminance", "chroma-distance"):
            raise ValueError(f"unknown threshold_mode {self.threshold_mode!r}")
        if not 0 <= self.threshold <= 255:
            raise ValueError("threshold must be in [0, 255]")
        if self.fill_holes_below < 0:
            raise ValueError("fill_holes_below must be >= 0")


def _luma(pixels: np.ndarray) -> np.ndarray:
    r, g, b = pixels[..., 0], pixels[..., 1], pixels[..., 2]
    return 0.299 * r + 0.587 * g + 0.114 * b


def _border_background_color(pixels: np.ndarray) -> np.ndarray:
    border = np.concatenate([pixels[0], pixels[-1], pixels[:, 0], pixels[:, -1]])
    return np.median(border.astype(np.float64), axis=0)


def mask_background(image: RgbImage, config: MaskConfig = MaskConfig()) -> BinaryMask:
    """Threshold the image into a garment mask.

    Raises EmptyMask when nothing survives thresholding. With
    ``keep_largest_component`` the result has exactly one 8-connected
    component; holes smaller than ``fill_holes_below`` pixels are filled.
    """
    px = image.pixels
    if config.threshold_mode == "luminance":
        fg = _luma(px) >= config.threshold
    else:
        bg = _border_background_color(px)
        dist = np.linalg.norm(px.astype(np.float64) - bg, axis=-1)
        fg = dist > config.threshold

    if not fg.any():
        raise EmptyMask("no foreground pixel above threshold")

    if config.keep_largest_component:
        fg = _largest_component(fg)
    if config.fill_holes_below > 0:
        fg = _fill_small_holes(fg, config.fill_holes_below)
    return BinaryMask(fg)


def _largest_component(bits: np.ndarray) -> np.ndarray:
    labels, n = ndimage.label(bits, structure=_CONN8)
    if n <= 1:
        return bits
    areas = np.bincount(labels.ravel())
    areas[0] = 0
    best = int(areas.max())
    candidates = np.flatnonzero(areas == best)
    # Equal-area tie: keep the component whose first row-major pixel is smallest.
    if candidates.size > 1:
        flat = labels.ravel()
        first = {int(c): int(np.flatnonzero(flat == c)[0]) for c in candidates}
        keep = min(candidates, key=lambda c: first[int(c)])
    else:
        keep = candidates[0]
    return labels == keep


def _fill_small_holes(bits: np.ndarray, max_area: int) -> np.ndarray:
    bg_labels, n = ndimage.label(~bits, structure=_CONN4)
    if n == 0:
        return bits
    border = np.zeros_like(bits)
    border[0], border[-1], border[:, 0], border[:, -1] = True, True, True, True
    outside = np.unique(bg_labels[border & ~bits])
    areas = np.bincount(bg_labels.ravel())
    out = bits.copy()
    for lab in range(1, n + 1):
        if lab in outside:
            continue
        if areas[lab] < max_area:
            out[bg_labels == lab] = True
    return out


def count_components(mask: BinaryMask, connectivity: int = 8) -> int:
    """Number of connected foreground components (connectivity 4 or 8)."""
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    structure = _CONN8 if connectivity == 8 else _CONN4
    _, n = ndimage.label(mask.bits, structure=structure)
    return int(n)


def count_holes(mask: BinaryMask) -> int:
    """Number of 4-connected background components not touching the border."""
    bg = ~mask.bits
    labels, n = ndimage.label(bg, structure=_CONN4)
    if n == 0:
        return 0
    border_labels = set(np.unique(labels[0])) | set(np.unique(labels[-1]))
    border_labels |= set(np.unique(labels[:, 0])) | set(np.unique(labels[:, -1]))
    border_labels.discard(0)
    return int(n - len(border_labels))


# ---------------------------------------------------------------------------
# PNG / PBM serialization
# ---------------------------------------------------------------------------

def load_image(path_or_bytes) -> RgbImage:
    """Load a PNG (8-bit RGB or grayscale) as an RgbImage."""
    try:
        if isinstance(path_or_bytes, (bytes, bytearray)):
            img = Image.open(io.BytesIO(path_or_bytes))
        else:
            img = Image.open(path_or_bytes)
        img = img.convert("RGB")
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise MalformedImage(str(exc)) from exc
    return RgbImage(np.asarray(img, dtype=np.uint8))


def mask_to_png_bytes(mask: BinaryMask) -> bytes:
    img = Image.fromarray(np.where(mask.bits, 255, 0).astype(np.uint8), mode="L")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def save_mask_png(mask: BinaryMask, path) -> None:
    with open(path, "wb") as fh:
        fh.write(mask_to_png_bytes(mask))


def load_mask_png(path_or_bytes) -> BinaryMask:
    """Read a 0/255 grayscale PNG back into a mask (any nonzero = set)."""
    img = load_image(path_or_bytes)
    return BinaryMask(_luma(img.pixels) > 0)


def save_mask_pbm(mask: BinaryMask, path) -> None:
    """Write the mask as binary PBM (P4); set bits are PBM black (1)."""
    h, w = mask.bits.shape
    header = f"P4\n{w} {h}\n".encode("ascii")
    packed = np.packbits(mask.bits, axis=1)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(packed.tobytes())


def load_mask_pbm(path) -> BinaryMask:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        if not data.startswith(b"P4"):
            raise ValueError("not a P4 PBM file")
        # Header tokens may be separated by arbitrary whitespace/comments.
        tokens, pos = [], 2
        while len(tokens) < 2:
            while pos < len(data) and data[pos : pos + 1].isspace():
                pos += 1
            if data[pos : pos + 1] == b"#":
                while pos < len(data) and data[pos] != 0x0A:
                    pos += 1
                continue
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace():
                pos += 1
            tokens.append(int(data[start:pos]))
        pos += 1  # single whitespace after height
        w, h = tokens
        row_bytes = (w + 7) // 8
        raw = np.frombuffer(data[pos : pos + row_bytes * h], dtype=np.uint8)
        bits = np.unpackbits(raw.reshape(h, row_bytes), axis=1)[:, :w].astype(bool)
    except (ValueError, IndexError) as exc:
        raise MalformedImage(f"bad PBM: {exc}") from exc
    return BinaryMask(bits)
