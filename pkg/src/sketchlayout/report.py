"""Report rendering: diagnostic figures plus a delimited positions table.

Writes into a directory:
  positions.csv   node,x,y rows for the final layout
  layout.png      the laid-out graph
  extraction.png  skeleton pixels with the simplified chain on top
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .mapping import Graph
from .polyline import SegmentChain
from .raster import BinaryImage

LABEL_LIMIT = 60  # node labels clutter larger drawings


def write_positions_csv(path: Path, positions: dict[str, tuple[float, float]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "x", "y"])
        for node in sorted(positions):
            x, y = positions[node]
            writer.writerow([node, f"{x:.4f}", f"{y:.4f}"])


def _draw_layout(ax, graph: Graph, positions: dict[str, tuple[float, float]]) -> None:
    for a, b in graph.edges:
        xa, ya = positions[a]
        xb, yb = positions[b]
        ax.plot([xa, xb], [ya, yb], color="#aaaaaa", linewidth=0.8, zorder=1)
    xs = [positions[n][0] for n in sorted(positions)]
    ys = [positions[n][1] for n in sorted(positions)]
    ax.scatter(xs, ys, s=30, color="#4a90d9", edgecolors="#1d4e89", zorder=2)
    if len(positions) <= LABEL_LIMIT:
        for node, (x, y) in positions.items():
            ax.annotate(node, (x, y), fontsize=6, ha="center", va="center", zorder=3)
    ax.set_aspect("equal")
    ax.invert_yaxis()  # screen coordinates: y grows downward
    ax.set_title("layout")


def _draw_extraction(ax, skeleton: Optional[BinaryImage], chain: Optional[SegmentChain]) -> None:
    if skeleton is not None and skeleton.count():
        ys, xs = np.nonzero(skeleton.pixels)
        ax.scatter(xs, ys, s=1, color="#cccccc", zorder=1)
    if chain is not None:
        pts = chain.points
        ax.plot(pts[:, 0], pts[:, 1], color="#d94a4a", linewidth=1.5, marker="o",
                markersize=3, zorder=2)
    ax.set_aspect("equal")
    ax.invert_yaxis()
    ax.set_title("skeleton and chain" + (" (closed)" if chain is not None and chain.closed else ""))


def write_report(
    out_dir: str | Path,
    graph: Graph,
    positions: dict[str, tuple[float, float]],
    chain: Optional[SegmentChain] = None,
    skeleton: Optional[BinaryImage] = None,
) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = out / "positions.csv"
    write_positions_csv(csv_path, positions)
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=(6, 6))
    _draw_layout(ax, graph, positions)
    layout_path = out / "layout.png"
    fig.savefig(layout_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(layout_path)

    fig, ax = plt.subplots(figsize=(6, 6))
    _draw_extraction(ax, skeleton, chain)
    extraction_path = out / "extraction.png"
    fig.savefig(extraction_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(extraction_path)
    return written
