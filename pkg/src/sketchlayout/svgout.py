"""SVG export of a layout: edges as lines, nodes as labeled circles."""

from __future__ import annotations

from typing import Mapping
from xml.sax.saxutils import escape

from .mapping import Graph

NODE_RADIUS = 8.0
MARGIN_FRACTION = 0.05


def layout_to_svg(graph: Graph, positions: Mapping[str, tuple[float, float]]) -> str:
    xs = [p[0] for p in positions.values()]
    ys = [p[1] for p in positions.values()]
    if not xs:
        return '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1"/>'
    min_x, max_x = min(xs) - NODE_RADIUS, max(xs) + NODE_RADIUS
    min_y, max_y = min(ys) - NODE_RADIUS, max(ys) + NODE_RADIUS
    w = max(max_x - min_x, 1.0)
    h = max(max_y - min_y, 1.0)
    pad = MARGIN_FRACTION * max(w, h)
    view = f"{min_x - pad:.2f} {min_y - pad:.2f} {w + 2 * pad:.2f} {h + 2 * pad:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}">',
        '<g stroke="#999" stroke-width="1.5">',
    ]
    for a, b in sorted(graph.edges):
        xa, ya = positions[a]
        xb, yb = positions[b]
        parts.append(
            f'<line x1="{xa:.2f}" y1="{ya:.2f}" x2="{xb:.2f}" y2="{yb:.2f}"/>'
        )
    parts.append("</g>")
    for node in sorted(positions):
        x, y = positions[node]
        parts.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{NODE_RADIUS}" '
            'fill="#4a90d9" stroke="#1d4e89"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{y + 3:.2f}" font-size="7" '
            f'text-anchor="middle" fill="#fff">{escape(node)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
