"""SVG and JSON export of planar nets.

One polygon element per placed face (or face fragment), cut edges stroked
distinctly, overlapping pairs shaded.  Coordinates are printed with 12
significant digits; the view box is padded by 5 percent.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np

from .unfold import FanCutResult, GeneralNet, OverlapReport, PlanarLayout


def _fmt(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"


def _poly_points(poly: np.ndarray) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in poly)


def _svg_document(polys, extra_segments, overlap_indices, title):
    pts = np.vstack(polys)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = 0.05 * float(span.max())
    view = (lo[0] - pad, lo[1] - pad, span[0] + 2 * pad, span[1] + 2 * pad)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(view[0])} {_fmt(view[1])} {_fmt(view[2])} {_fmt(view[3])}">',
        f'  <title>{title}</title>',
        # flip y so the mathematical orientation reads naturally
        f'  <g transform="translate(0 {_fmt(view[1] * 2 + view[3])}) scale(1 -1)">',
    ]
    for i, poly in enumerate(polys):
        shaded = i in overlap_indices
        fill = "#e07a7a" if shaded else "#d8e6f2"
        opacity = "0.75" if shaded else "0.9"
        parts.append(
            f'    <polygon points="{_poly_points(poly)}" fill="{fill}" '
            f'fill-opacity="{opacity}" stroke="#3a3a3a" '
            f'stroke-width="{_fmt(0.004 * span.max())}"/>')
    for (a, b) in extra_segments:
        parts.append(
            f'    <line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
            f'y2="{_fmt(b[1])}" stroke="#c22" '
            f'stroke-width="{_fmt(0.009 * span.max())}" stroke-linecap="round"/>')
    parts.append("  </g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _cut_segments(layout: PlanarLayout):
    """Both placed copies of every cut edge."""
    segments = []
    mesh = layout.mesh
    for eid in layout.cutting:
        edge = mesh.edges[eid]
        a, b = edge.endpoints
        for f in edge.faces:
            segments.append((layout.placed_vertex(f, a),
                             layout.placed_vertex(f, b)))
    return segments


def layout_to_svg(layout: PlanarLayout,
                  overlap: OverlapReport | None = None,
                  title: str = "edge unfolding") -> str:
    polys = [p.polygon for p in layout.placements]
    shaded = set()
    if overlap is not None:
        for i, j, _ in overlap.overlapping_pairs:
            shaded.add(i)
            shaded.add(j)
    return _svg_document(polys, _cut_segments(layout), shaded, title)


def general_net_to_svg(net: GeneralNet, title: str = "general unfolding") -> str:
    polys = [p.polygon for p in net.pieces]
    shaded = {i for i, p in enumerate(net.pieces) if p.kind == "band"}
    # bands are highlighted rather than cut edges (cuts cross face interiors)
    doc = _svg_document(polys, [], set(), title)
    return doc if not shaded else _svg_document(polys, [], shaded, title)


def fan_cut_to_svg(result: FanCutResult, title: str = "fan cut") -> str:
    shaded = set()
    for i, j, _ in result.overlap.overlapping_pairs:
        shaded.add(i)
        shaded.add(j)
    return _svg_document(result.pieces, [], shaded, title)


def layout_to_json(layout: PlanarLayout,
                   overlap: OverlapReport | None = None) -> str:
    doc = {
        "faces": [
            {
                "face_id": p.face_id,
                "vertices": [[float(_fmt(x)), float(_fmt(y))]
                             for x, y in p.polygon],
            }
            for p in layout.placements
        ],
        "cut_edges": list(layout.cutting),
        "consistency_ok": layout.consistency_ok,
        "overlaps": ([
            {"faces": [i, j], "area": float(_fmt(a))}
            for i, j, a in overlap.overlapping_pairs
        ] if overlap is not None else None),
    }
    return json.dumps(doc, sort_keys=True, indent=2)
