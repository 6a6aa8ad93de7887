"""Constraint generation from a node-line mapping.

Each chain segment is classified into one of eight directions with a slope
threshold; mapped nodes then yield relative placement constraints against
their traversal parent, and horizontal/vertical segments yield alignment
groups.  Screen coordinates: y grows downward, so positive dy means
top-to-bottom.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
import numpy as np

from .mapping import NodeLineMapping
from .polyline import SegmentChain

DEFAULT_EPSILON = 0.2

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


class Direction(str, Enum):
    L_R = "l-r"
    R_L = "r-l"
    T_B = "t-b"
    B_T = "b-t"
    TL_BR = "tl-br"
    BR_TL = "br-tl"
    TR_BL = "tr-bl"
    BL_TR = "bl-tr"

    @property
    def is_horizontal(self) -> bool:
        return self in (Direction.L_R, Direction.R_L)

    @property
    def is_vertical(self) -> bool:
        return self in (Direction.T_B, Direction.B_T)

    @property
    def is_diagonal(self) -> bool:
        return not (self.is_horizontal or self.is_vertical)


@dataclass(frozen=True)
class RelativeConstraint:
    """`first` is left of (horizontal) or above (vertical) `second`."""

    first: str
    second: str
    axis: str  # HORIZONTAL or VERTICAL

    def to_json(self) -> dict:
        if self.axis == HORIZONTAL:
            return {"left": self.first, "right": self.second}
        return {"top": self.first, "bottom": self.second}


@dataclass
class ConstraintSet:
    relative: list[RelativeConstraint] = field(default_factory=list)
    horizontal_alignments: list[list[str]] = field(default_factory=list)
    vertical_alignments: list[list[str]] = field(default_factory=list)
    dropped: int = 0

    def to_json(self) -> dict:
        return {
            "relativePlacement": [c.to_json() for c in self.relative],
            "alignment": {
                "horizontal": [list(g) for g in self.horizontal_alignments],
                "vertical": [list(g) for g in self.vertical_alignments],
            },
        }

    @classmethod
    def empty(cls) -> "ConstraintSet":
        return cls()


def classify_direction(p: np.ndarray, q: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> Direction:
    """Eight-way direction of the segment p -> q.

    Horizontal when |dy/dx| < epsilon, else vertical when |dx/dy| < epsilon,
    else diagonal by the signs of (dx, dy).  Ratios are evaluated without
    division so zero deltas need no special casing.
    """
    dx = float(q[0]) - float(p[0])
    dy = float(q[1]) - float(p[1])
    if dx == 0.0 and dy == 0.0:
        raise ValueError("zero-length segment has no direction")
    if abs(dy) < epsilon * abs(dx):
        return Direction.L_R if dx > 0 else Direction.R_L
    if abs(dx) < epsilon * abs(dy):
        return Direction.T_B if dy > 0 else Direction.B_T
    if dx > 0 and dy > 0:
        return Direction.TL_BR
    if dx < 0 and dy < 0:
        return Direction.BR_TL
    if dx < 0 and dy > 0:
        return Direction.TR_BL
    return Direction.BL_TR


def _relative_for(direction: Direction, q: str, v: str) -> list[RelativeConstraint]:
    if direction is Direction.L_R:
        return [RelativeConstraint(q, v, HORIZONTAL)]
    if direction is Direction.R_L:
        return [RelativeConstraint(v, q, HORIZONTAL)]
    if direction is Direction.T_B:
        return [RelativeConstraint(q, v, VERTICAL)]
    if direction is Direction.B_T:
        return [RelativeConstraint(v, q, VERTICAL)]
    if direction is Direction.TL_BR:
        return [RelativeConstraint(q, v, HORIZONTAL), RelativeConstraint(q, v, VERTICAL)]
    if direction is Direction.BR_TL:
        return [RelativeConstraint(v, q, HORIZONTAL), RelativeConstraint(v, q, VERTICAL)]
    if direction is Direction.TR_BL:
        return [RelativeConstraint(v, q, HORIZONTAL), RelativeConstraint(q, v, VERTICAL)]
    return [RelativeConstraint(q, v, HORIZONTAL), RelativeConstraint(v, q, VERTICAL)]


class _AxisDag:
    """Incremental acyclicity check for one axis's ordering digraph."""

    def __init__(self) -> None:
        self.succ: dict[str, set[str]] = {}

    def would_cycle(self, first: str, second: str) -> bool:
        if first == second:
            return True
        stack = [second]
        seen = {second}
        while stack:
            u = stack.pop()
            if u == first:
                return True
            for w in self.succ.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def add(self, first: str, second: str) -> None:
        self.succ.setdefault(first, set()).add(second)


def generate(
    mapping: NodeLineMapping,
    chain: SegmentChain,
    epsilon: float = DEFAULT_EPSILON,
) -> ConstraintSet:
    """Emit relative placement and alignment constraints from the mapping.

    Per segment: each mapped node with a defined parent gets one relative
    constraint for horizontal/vertical segments and two (one per axis) for
    diagonal ones.  Horizontal and vertical segments with two or more nodes
    also emit an alignment group preserving node order.  Exact duplicates
    are removed and any constraint that would close a directed cycle within
    its axis is dropped and counted.
    """
    if len(mapping.assignments) != chain.n_segments:
        raise ValueError(
            f"mapping covers {len(mapping.assignments)} segments, "
            f"chain has {chain.n_segments}"
        )

    cs = ConstraintSet()
    seen: set[tuple[str, str, str]] = set()
    dags = {HORIZONTAL: _AxisDag(), VERTICAL: _AxisDag()}

    for seg_index, nodes in mapping.assignments:
        if not nodes:
            continue
        p, q_pt = chain.segment(seg_index)
        direction = classify_direction(p, q_pt, epsilon)
        for v in nodes:
            parent = mapping.parent.get(v)
            if parent is None or parent == v:
                continue
            for rc in _relative_for(direction, parent, v):
                key = (rc.first, rc.second, rc.axis)
                if key in seen:
                    continue
                seen.add(key)
                dag = dags[rc.axis]
                if dag.would_cycle(rc.first, rc.second):
                    cs.dropped += 1
                    continue
                dag.add(rc.first, rc.second)
                cs.relative.append(rc)
        if len(nodes) >= 2:
            if direction.is_horizontal:
                cs.horizontal_alignments.append(list(nodes))
            elif direction.is_vertical:
                cs.vertical_alignments.append(list(nodes))
    return cs
