"""Raster stage: binarize a sketch image, thin it, trace the skeleton.

The sketch arrives as a PNG or PGM raster.  ``binarize`` turns it into a
:class:`BinaryImage`, ``thin`` reduces strokes to one-pixel-wide skeletons
with the two-subpass Zhang-Suen scheme, and ``trace_skeleton`` converts the
skeleton into pixel polylines by recursive region splitting.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np
from PIL import Image

from .errors import InvalidImageError

# Alpha below this is treated as background regardless of color: canvas
# exports are transparent outside the strokes.
ALPHA_FLOOR = 16

DEFAULT_THRESHOLD = 128
DEFAULT_CHUNK_SIZE = 10
MIN_POLYLINE_LENGTH = 3.0

ImageLike = Union[Image.Image, np.ndarray, str, Path]

# A traced polyline is an (n, 2) float array of (x, y) pixel coordinates.
RasterPolyline = np.ndarray


@dataclass
class BinaryImage:
    """Rectangular foreground/background grid, origin top-left, y down.

    ``pixels`` is a bool array of shape ``(height, width)`` indexed
    ``pixels[y, x]``.
    """

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise InvalidImageError(
                f"image dimensions must be >= 1, got {self.width}x{self.height}"
            )
        px = np.asarray(self.pixels, dtype=bool)
        if px.shape != (self.height, self.width):
            raise InvalidImageError(
                f"pixel grid shape {px.shape} does not match "
                f"{self.height}x{self.width}"
            )
        self.pixels = px

    @classmethod
    def from_foreground(
        cls, width: int, height: int, foreground: Iterable[tuple[int, int]]
    ) -> "BinaryImage":
        if width < 1 or height < 1:
            raise InvalidImageError(
                f"image dimensions must be >= 1, got {width}x{height}"
            )
        px = np.zeros((height, width), dtype=bool)
        for x, y in foreground:
            if not (0 <= x < width and 0 <= y < height):
                raise InvalidImageError(
                    f"foreground pixel ({x}, {y}) outside {width}x{height}"
                )
            px[y, x] = True
        return cls(width, height, px)

    @property
    def foreground(self) -> set[tuple[int, int]]:
        ys, xs = np.nonzero(self.pixels)
        return {(int(x), int(y)) for x, y in zip(xs, ys)}

    def count(self) -> int:
        return int(self.pixels.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self.pixels, other.pixels))
        )


def load_image(source: ImageLike) -> Image.Image:
    """Open a PNG or PGM sketch; anything PIL decodes as such is accepted."""
    if isinstance(source, Image.Image):
        return source
    if isinstance(source, np.ndarray):
        return Image.fromarray(source)
    try:
        img = Image.open(source)
        img.load()
    except Exception as exc:
        raise InvalidImageError(f"cannot read image {source!r}: {exc}") from exc
    return img


def _luminance(img: Image.Image) -> tuple[np.ndarray, np.ndarray | None]:
    """Integer luminance 0..255 plus the alpha plane when present."""
    alpha = None
    if img.mode in ("RGBA", "LA", "PA"):
        alpha = np.asarray(img.getchannel("A"), dtype=np.uint8)
    if img.mode not in ("L", "I", "F"):
        base = img.convert("RGB")
        arr = np.asarray(base, dtype=np.uint32)
        lum = (299 * arr[..., 0] + 587 * arr[..., 1] + 114 * arr[..., 2]) // 1000
        lum = lum.astype(np.uint8)
    else:
        lum = np.asarray(img.convert("L"), dtype=np.uint8)
    return lum, alpha


def binarize(
    image: ImageLike,
    threshold: int = DEFAULT_THRESHOLD,
    invert: bool = False,
) -> BinaryImage:
    """Threshold a grayscale or color raster into a BinaryImage.

    A pixel is foreground iff its luminance is below ``threshold`` (sketch
    strokes are dark on light).  ``invert`` flips the luminance before the
    test, so ``binarize(img, t, invert=True)`` equals ``binarize`` on the
    luminance-inverted image.  Nearly transparent pixels are background.
    """
    img = load_image(image)
    if img.width < 1 or img.height < 1:
        raise InvalidImageError("empty image")
    lum, alpha = _luminance(img)
    if invert:
        lum = 255 - lum
    fg = lum < threshold
    if alpha is not None:
        fg &= alpha >= ALPHA_FLOOR
    return BinaryImage(img.width, img.height, fg)


# ---------------------------------------------------------------------------
# Zhang-Suen thinning
# ---------------------------------------------------------------------------


def _neighbor_planes(grid: np.ndarray) -> list[np.ndarray]:
    """P2..P9 planes (N, NE, E, SE, S, SW, W, NW); out of bounds reads 0."""
    p = np.pad(grid, 1, mode="constant")
    return [
        p[0:-2, 1:-1],  # P2 north
        p[0:-2, 2:],    # P3 north-east
        p[1:-1, 2:],    # P4 east
        p[2:, 2:],      # P5 south-east
        p[2:, 1:-1],    # P6 south
        p[2:, 0:-2],    # P7 south-west
        p[1:-1, 0:-2],  # P8 west
        p[0:-2, 0:-2],  # P9 north-west
    ]


def _thin_subpass(grid: np.ndarray, second: bool) -> bool:
    n = _neighbor_planes(grid)
    b = np.zeros(grid.shape, dtype=np.uint8)
    for plane in n:
        b += plane
    ring = n + [n[0]]
    a = np.zeros(grid.shape, dtype=np.uint8)
    for k in range(8):
        a += (ring[k] == 0) & (ring[k + 1] == 1)
    p2, p4, p6, p8 = n[0], n[2], n[4], n[6]
    if not second:
        edge = (p2 * p4 * p6 == 0) & (p4 * p6 * p8 == 0)
    else:
        edge = (p2 * p4 * p8 == 0) & (p2 * p6 * p8 == 0)
    remove = (grid == 1) & (b >= 2) & (b <= 6) & (a == 1) & edge
    if not remove.any():
        return False
    grid[remove] = 0
    return True


def thin(img: BinaryImage) -> BinaryImage:
    """Zhang-Suen skeleton of ``img``.

    Alternates the two deletion subpasses until a full sweep removes
    nothing.  The result is a fixed point, so ``thin`` is idempotent, and
    pixels are only ever removed.
    """
    grid = img.pixels.astype(np.uint8)
    changed = True
    while changed:
        changed = _thin_subpass(grid, second=False)
        changed = _thin_subpass(grid, second=True) or changed
    return BinaryImage(img.width, img.height, grid.astype(bool))


# ---------------------------------------------------------------------------
# Skeleton tracing
# ---------------------------------------------------------------------------


def _polyline_length(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    return float(np.sqrt(((points[1:] - points[:-1]) ** 2).sum(axis=1)).sum())


def _dedupe(points: list[tuple[float, float]]) -> np.ndarray:
    out: list[tuple[float, float]] = []
    for pt in points:
        if not out or (abs(pt[0] - out[-1][0]) > 1e-9 or abs(pt[1] - out[-1][1]) > 1e-9):
            out.append(pt)
    return np.array(out, dtype=float)


def _border_cells(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    """Border pixels of the region in one clockwise loop from the top-left."""
    cells: list[tuple[int, int]] = []
    cells.extend((x, y0) for x in range(x0, x1))
    cells.extend((x1 - 1, y) for y in range(y0 + 1, y1))
    if y1 - y0 > 1:
        cells.extend((x, y1 - 1) for x in range(x1 - 2, x0 - 1, -1))
    if x1 - x0 > 1:
        cells.extend((x0, y) for y in range(y1 - 2, y0, -1))
    return cells


def _border_keypoints(grid: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> list[tuple[float, float]]:
    """Midpoints of the circular runs of foreground pixels along the border."""
    cells = _border_cells(x0, y0, x1, y1)
    flags = [bool(grid[y, x]) for x, y in cells]
    n = len(cells)
    if not any(flags):
        return []
    if all(flags):
        return [(float(cells[0][0]), float(cells[0][1]))]
    # rotate so the loop starts on a background cell, then scan plain runs
    start = flags.index(False)
    keypoints = []
    run_start = None
    for off in range(1, n + 1):
        i = (start + off) % n
        if flags[i] and run_start is None:
            run_start = off
        elif not flags[i] and run_start is not None:
            mid = (start + run_start + (off - run_start) // 2) % n
            keypoints.append((float(cells[mid][0]), float(cells[mid][1])))
            run_start = None
    return keypoints


def _chunk_fragments(grid: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> list[np.ndarray]:
    sub = grid[y0:y1, x0:x1]
    ys, xs = np.nonzero(sub)
    if len(xs) == 0:
        return []
    centroid = (float(xs.mean()) + x0, float(ys.mean()) + y0)
    keypoints = _border_keypoints(grid, x0, y0, x1, y1)
    frags: list[np.ndarray] = []
    if len(keypoints) == 1:
        # the stroke terminates inside this chunk; run out to its tip
        kp = keypoints[0]
        d2 = (xs + x0 - kp[0]) ** 2 + (ys + y0 - kp[1]) ** 2
        tip_i = int(d2.argmax())
        tip = (float(xs[tip_i]) + x0, float(ys[tip_i]) + y0)
        pts = _dedupe([kp, centroid, tip])
        if len(pts) >= 2:
            frags.append(pts)
    elif len(keypoints) == 2:
        pts = _dedupe([keypoints[0], centroid, keypoints[1]])
        if len(pts) >= 2:
            frags.append(pts)
    elif len(keypoints) > 2:
        for kp in keypoints:
            pts = _dedupe([kp, centroid])
            if len(pts) >= 2:
                frags.append(pts)
    if not frags:
        # isolated blob, or a stroke hugging the region border whose run
        # midpoint collapsed onto the centroid: span the bounding box
        lo = (float(xs.min()) + x0, float(ys.min()) + y0)
        hi = (float(xs.max()) + x0, float(ys.max()) + y0)
        pts = _dedupe([lo, centroid, hi])
        if len(pts) >= 2:
            frags.append(pts)
    return frags


def _runs_crossed(grid: np.ndarray, x0: int, y0: int, x1: int, y1: int, per: str) -> np.ndarray:
    """Foreground runs crossed by each candidate split line of the region.

    per='column': one count per column x0..x1-1 (vertical seams);
    per='row': one count per row y0..y1-1 (horizontal seams).
    """
    sub = grid[y0:y1, x0:x1]
    if per == "column":
        starts = sub & ~np.vstack([np.zeros((1, sub.shape[1]), dtype=bool), sub[:-1]])
        return starts.sum(axis=0)
    starts = sub & ~np.hstack([np.zeros((sub.shape[0], 1), dtype=bool), sub[:, :-1]])
    return starts.sum(axis=1)


def _pick_split(counts: np.ndarray, adjacent: np.ndarray, lo: int, hi: int, mid: float) -> int:
    """Index in [lo, hi) minimizing runs crossed, ties toward the middle.

    ``adjacent`` counts foreground pixels hugging each candidate seam;
    strokes running along a seam would swallow a whole region border into
    one run, so seams prefer to stay off the strokes.
    """
    idx = np.arange(lo, hi)
    order = np.lexsort((idx, np.abs(idx - mid), adjacent[lo:hi], counts[lo:hi]))
    return int(idx[order[0]])


def _merge_on_seam(
    frags_a: list[np.ndarray],
    frags_b: list[np.ndarray],
    axis: str,
    seam: float,
    tol: float = 3.0,
) -> list[np.ndarray]:
    """Concatenate polylines whose endpoints face each other across the seam."""
    frags = frags_a + frags_b
    coord = 0 if axis == "x" else 1
    while True:
        best = None
        for i in range(len(frags)):
            for ei in (0, -1):
                a = frags[i][ei]
                if abs(a[coord] - seam) > 2.0:
                    continue
                for j in range(i + 1, len(frags)):
                    for ej in (0, -1):
                        b = frags[j][ej]
                        if abs(b[coord] - seam) > 2.0:
                            continue
                        d = float(np.hypot(a[0] - b[0], a[1] - b[1]))
                        if d <= tol and (best is None or d < best[0]):
                            best = (d, i, ei, j, ej)
        if best is None:
            return frags
        _, i, ei, j, ej = best
        fa = frags[i] if ei == -1 else frags[i][::-1]
        fb = frags[j] if ej == 0 else frags[j][::-1]
        merged = _dedupe([tuple(p) for p in fa] + [tuple(p) for p in fb])
        frags = [f for k, f in enumerate(frags) if k not in (i, j)]
        if len(merged) >= 2:
            frags.append(merged)


def _trace_region(
    grid: np.ndarray, x0: int, y0: int, x1: int, y1: int, chunk: int
) -> list[np.ndarray]:
    if x1 <= x0 or y1 <= y0 or not grid[y0:y1, x0:x1].any():
        return []
    w, h = x1 - x0, y1 - y0
    if w <= chunk and h <= chunk:
        return _chunk_fragments(grid, x0, y0, x1, y1)
    if w >= h:
        counts = _runs_crossed(grid, x0, y0, x1, y1, per="column")
        colsum = grid[y0:y1, x0:x1].sum(axis=0)
        adjacent = colsum.copy()
        adjacent[1:] += colsum[:-1]
        lo = max(1, w // 4)
        hi = min(w - 1, 3 * w // 4) + 1
        hi = max(hi, lo + 1)
        split = x0 + _pick_split(counts, adjacent, lo, hi, w / 2.0)
        left = _trace_region(grid, x0, y0, split, y1, chunk)
        right = _trace_region(grid, split, y0, x1, y1, chunk)
        return _merge_on_seam(left, right, "x", split - 0.5)
    counts = _runs_crossed(grid, x0, y0, x1, y1, per="row")
    rowsum = grid[y0:y1, x0:x1].sum(axis=1)
    adjacent = rowsum.copy()
    adjacent[1:] += rowsum[:-1]
    lo = max(1, h // 4)
    hi = min(h - 1, 3 * h // 4) + 1
    hi = max(hi, lo + 1)
    split = y0 + _pick_split(counts, adjacent, lo, hi, h / 2.0)
    top = _trace_region(grid, x0, y0, x1, split, chunk)
    bottom = _trace_region(grid, x0, split, x1, y1, chunk)
    return _merge_on_seam(top, bottom, "y", split - 0.5)


def trace_skeleton(
    img: BinaryImage,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    min_length: float = MIN_POLYLINE_LENGTH,
) -> list[RasterPolyline]:
    """Trace a thinned image into polylines.

    Recursively splits the image along the row or column (within the middle
    half of the region) crossing the fewest foreground runs.  Regions at or
    below ``chunk_size`` are resolved directly: foreground runs on the region
    border give key points, which are connected through the centroid of the
    region's foreground.  Fragments meeting across a seam are concatenated.
    Polylines shorter than ``min_length`` are dropped as skeleton burrs.
    """
    frags = _trace_region(img.pixels, 0, 0, img.width, img.height, max(2, chunk_size))
    return [f for f in frags if _polyline_length(f) >= min_length]


def polyline_to_lists(line: RasterPolyline) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in line]
