"""Polyline simplification and chain assembly.

``simplify`` trims traced polylines with a radial-distance pre-pass followed
by Ramer-Douglas-Peucker, keeping every removed point within the tolerance
of the result.  ``assemble_chain`` greedily orders the simplified polylines
into a single chain of segments sharing endpoints and detects closed loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotChainableError

DEFAULT_OFFSET_THRESHOLD = 5.0


@dataclass
class SegmentChain:
    """Ordered segments l_i = (points[i], points[i+1]); closed loops wrap."""

    points: np.ndarray  # (n+1, 2) float
    closed: bool

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError("chain needs at least two points")
        if (np.abs(pts[1:] - pts[:-1]).max(axis=1) < 1e-12).any():
            raise ValueError("consecutive chain points must be distinct")
        if self.closed and not np.array_equal(pts[0], pts[-1]):
            raise ValueError("closed chain must end where it starts")
        self.points = pts

    @property
    def n_segments(self) -> int:
        return len(self.points) - 1

    def segment(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self.points[i], self.points[i + 1]

    def lengths(self) -> np.ndarray:
        return np.sqrt(((self.points[1:] - self.points[:-1]) ** 2).sum(axis=1))

    def to_json(self) -> dict:
        return {
            "closed": self.closed,
            "points": [[float(x), float(y)] for x, y in self.points],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SegmentChain":
        return cls(np.asarray(data["points"], dtype=float), bool(data["closed"]))


def _span_distances(pts: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Distances from pts[lo+1:hi] to the segment pts[lo]-pts[hi]."""
    a, b = pts[lo], pts[hi]
    seg = b - a
    den = float(seg @ seg)
    p = pts[lo + 1 : hi]
    if den < 1e-18:
        diff = p - a
    else:
        t = np.clip((p - a) @ seg / den, 0.0, 1.0)
        diff = p - a - t[:, None] * seg
    return np.sqrt((diff * diff).sum(axis=1))


def simplify(line: np.ndarray, tolerance: float) -> np.ndarray:
    """Radial-distance pre-pass plus Ramer-Douglas-Peucker.

    The output is a subsequence of the input with first and last points
    preserved.  The RDP split step measures deviation over *all* original
    points of a span, including ones already discarded by the radial pass,
    so every removed point ends up within ``tolerance`` of the result.
    """
    pts = np.asarray(line, dtype=float)
    if pts.ndim != 2 or len(pts) < 2:
        raise ValueError("polyline needs at least two points")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    n = len(pts)
    if n == 2:
        return pts.copy()

    # radial pass: drop points closer than tolerance to the previous survivor
    selectable = np.zeros(n, dtype=bool)
    selectable[0] = selectable[-1] = True
    prev = 0
    for i in range(1, n - 1):
        if math.hypot(pts[i, 0] - pts[prev, 0], pts[i, 1] - pts[prev, 1]) >= tolerance:
            selectable[i] = True
            prev = i

    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        dists = _span_distances(pts, lo, hi)
        if float(dists.max()) <= tolerance:
            continue
        sel = selectable[lo + 1 : hi]
        if not sel.any():
            # cannot happen: unselectable points sit within tolerance of an
            # endpoint survivor, so the span max would be within tolerance
            continue
        masked = np.where(sel, dists, -1.0)
        split = lo + 1 + int(masked.argmax())
        keep[split] = True
        stack.append((lo, split))
        stack.append((split, hi))
    return pts[keep]


def _length(line: np.ndarray) -> float:
    return float(np.sqrt(((line[1:] - line[:-1]) ** 2).sum(axis=1)).sum())


def assemble_chain(
    lines: list[np.ndarray],
    offset_threshold: float = DEFAULT_OFFSET_THRESHOLD,
) -> SegmentChain:
    """Greedily chain polylines into one ordered segment list.

    Starts from the longest polyline and repeatedly appends the unused
    polyline whose nearest endpoint lies within ``offset_threshold`` of the
    chain tail, snapping the joint onto the tail.  When the tail stalls the
    chain is reversed once so the other end can grow too.  The chain closes
    when its final point lands within the threshold of its start.

    Raises :class:`NotChainableError` when the chained polylines cover less
    than 60% of the total input length, which indicates a branching or
    disconnected sketch.
    """
    lines = [np.asarray(l, dtype=float) for l in lines if len(l) >= 2]
    if not lines:
        raise NotChainableError("no polylines to assemble")
    if offset_threshold < 0:
        raise ValueError("offset_threshold must be >= 0")

    lengths = [_length(l) for l in lines]
    total = sum(lengths)
    start = min(range(len(lines)), key=lambda i: (-lengths[i], i))
    chain = [tuple(p) for p in lines[start]]
    used = {start}
    used_length = lengths[start]

    def best_candidate(tail: tuple[float, float]):
        best_key = None
        best = None
        for i, line in enumerate(lines):
            if i in used:
                continue
            for reverse, pt in ((False, line[0]), (True, line[-1])):
                d = math.hypot(pt[0] - tail[0], pt[1] - tail[1])
                if d > offset_threshold:
                    continue
                key = (d, -lengths[i], float(pt[0]), float(pt[1]))
                if best_key is None or key < best_key:
                    best_key = key
                    best = (i, reverse)
        return best

    for _ in range(2):  # grow at the tail, then once more after reversing
        while True:
            cand = best_candidate(chain[-1])
            if cand is None:
                break
            i, reverse = cand
            pts = lines[i][::-1] if reverse else lines[i]
            # snap the joint onto the existing tail point
            chain.extend(tuple(p) for p in pts[1:])
            used.add(i)
            used_length += lengths[i]
        chain.reverse()

    if used_length < 0.6 * total:
        raise NotChainableError(
            f"chained {used_length:.1f}px of {total:.1f}px total; sketch "
            "appears branching or disconnected"
        )

    closed = False
    if len(chain) >= 3:
        gap = math.hypot(chain[-1][0] - chain[0][0], chain[-1][1] - chain[0][1])
        if gap <= offset_threshold:
            chain[-1] = chain[0]
            closed = True

    deduped: list[tuple[float, float]] = []
    for pt in chain:
        if not deduped or math.hypot(pt[0] - deduped[-1][0], pt[1] - deduped[-1][1]) > 1e-9:
            deduped.append(pt)
    if closed and len(deduped) >= 2:
        if math.hypot(deduped[-1][0] - deduped[0][0], deduped[-1][1] - deduped[0][1]) > 1e-9:
            deduped.append(deduped[0])
    if len(deduped) < 2 or (closed and len(deduped) < 3):
        raise NotChainableError("degenerate chain after snapping")
    return SegmentChain(np.asarray(deduped, dtype=float), closed)
