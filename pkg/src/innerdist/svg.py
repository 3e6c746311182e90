"""Minimal SVG rendering of a domain and an optional path."""
from __future__ import annotations

from .domain import PolygonalDomain


def render_svg(dom: PolygonalDomain, path=None, size: int = 480, points=()) -> str:
    pts = dom.all_vertices() + list(path.vertices if path is not None else ()) + list(points)
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    pad = 0.05 * span
    scale = size / (span + 2 * pad)

    def xy(p):
        return f"{(p[0] - lo_x + pad) * scale:.3f},{(hi_y - p[1] + pad) * scale:.3f}"

    def poly(vs):
        return " ".join(xy(p) for p in vs)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    if dom.outer is not None:
        out.append(f'<polygon points="{poly(dom.outer.vertices)}" fill="#eef" stroke="black"/>')
    for h in dom.holes:
        out.append(f'<polygon points="{poly(h.vertices)}" fill="#999" stroke="black"/>')
    for s in dom.slits:
        out.append(f'<polyline points="{poly(s.vertices)}" fill="none" stroke="black" stroke-width="2"/>')
    for p in dom.points:
        c = xy(p).split(",")
        out.append(f'<circle cx="{c[0]}" cy="{c[1]}" r="2" fill="black"/>')
    if path is not None:
        out.append(f'<polyline points="{poly(path.vertices)}" fill="none" stroke="red" stroke-width="1.5"/>')
    for p in points:
        c = xy(p).split(",")
        out.append(f'<circle cx="{c[0]}" cy="{c[1]}" r="3" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
