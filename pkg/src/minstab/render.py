"""Deterministic SVG rendering of instances and (fractional) solutions.

Output is plain text assembled in a fixed order with fixed number formatting,
so identical input yields byte-identical SVG. Edge stroke width is
proportional to the fractional weight; weight-1 edges get the full base
width.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .geom import Segment, bounding_box
from .instance import Instance


class RenderError(ValueError):
    pass


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def render_svg(
    inst: Instance,
    edges: Sequence[Segment] = (),
    weights: Optional[Mapping[Segment, float]] = None,
    annotation: str = "",
) -> str:
    """Points as circles, edges as weight-scaled strokes, one annotation line.

    Pass integral edges via ``edges`` or a fractional solution via
    ``weights`` (only weights above 1e-7 are drawn).
    """
    n = inst.n
    drawn: list[tuple[Segment, float]] = []
    if weights is not None:
        for e in sorted(weights):
            w = float(weights[e])
            if w > 1e-7:
                drawn.append((e, min(w, 1.0)))
    for e in sorted(edges):
        drawn.append((e, 1.0))
    for e, _ in drawn:
        if not (0 <= e.a < n and 0 <= e.b < n):
            raise RenderError(f"edge {tuple(e)} not valid for instance of size {n}")

    x0, y0, x1, y1 = bounding_box(inst.points)
    extent = max(x1 - x0, y1 - y0, 1)
    pad = max(1, (extent + 9) // 10)
    # flip y by negation so the drawing keeps mathematical orientation
    vb_x = x0 - pad
    vb_y = -(y1 + pad)
    vb_w = (x1 - x0) + 2 * pad
    vb_h = (y1 - y0) + 2 * pad
    base_width = extent / 50.0
    radius = extent / 60.0 + 0.05

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb_x} {vb_y} {vb_w} {vb_h}">',
    ]
    for e, w in drawn:
        p, q = inst.points[e.a], inst.points[e.b]
        out.append(
            f'<line x1="{p.x}" y1="{-p.y}" x2="{q.x}" y2="{-q.y}" '
            f'stroke="black" stroke-width="{_fmt(base_width * w)}" '
            'stroke-linecap="round"/>'
        )
    for p in inst.points:
        out.append(
            f'<circle cx="{p.x}" cy="{-p.y}" r="{_fmt(radius)}" fill="crimson"/>'
        )
    if annotation:
        font = max(extent / 15.0, 0.5)
        out.append(
            f'<text x="{_fmt(vb_x + pad * 0.2)}" y="{_fmt(vb_y + font * 1.1)}" '
            f'font-size="{_fmt(font)}" font-family="monospace">{_escape(annotation)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
