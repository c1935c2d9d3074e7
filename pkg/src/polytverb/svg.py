"""Self-contained SVG figures of a partition.

Input points are drawn as dots, each part's convex hull as a shaded polygon
(``<g class="hull">``), and the witness polytope's edges as solid lines
inside ``<g class="polytope">``.  Clouds in more than two dimensions are
projected onto a coordinate pair.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .engine import PartitionResult
from .exceptions import InvalidInputError
from .fourier import FiniteAbelianGroup
from .geometry import PointCloud

SVG_NS = "http://www.w3.org/2000/svg"
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def hull_outline(points: np.ndarray) -> np.ndarray:
    """Hull vertices of 2-d ``points`` in counter-clockwise order.

    Degenerate inputs (one point, or collinear points) fall back to the
    extreme points along the principal direction.
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) >= 3:
        try:
            return pts[ConvexHull(pts).vertices]
        except QhullError:
            pass
    if len(pts) <= 1:
        return pts
    centered = pts - pts.mean(axis=0)
    direction = np.linalg.svd(centered)[2][0]
    proj = centered @ direction
    return pts[[int(np.argmin(proj)), int(np.argmax(proj))]]


def polytope_edges(G: FiniteAbelianGroup) -> list[tuple[int, int]]:
    """Pairs of element indices differing by a unit step in one factor."""
    edges = set()
    for a, g in enumerate(G.elements):
        for i in range(G.rank):
            b = G.index(G.add(g, G.unit_vector(i)))
            if a != b:
                edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def render_svg(cloud: PointCloud, result: PartitionResult,
               proj: Optional[Sequence[int]] = None, size: int = 480,
               margin: int = 24) -> str:
    """SVG document (as text) for ``result`` on ``cloud``."""
    D = cloud.dimension
    if proj is None:
        proj = (0, 1) if D >= 2 else (0, 0)
    i, j = (int(p) for p in proj)
    if not (0 <= i < D and 0 <= j < D) or (i == j and D > 1):
        raise InvalidInputError(f"projection {i},{j} is not a coordinate pair of R^{D}")
    G = result.group
    pts2 = cloud.points[:, [i, j]]
    verts2 = result.vertex_array()[:, [i, j]]
    everything = np.vstack([pts2, verts2])
    lo, hi = everything.min(axis=0), everything.max(axis=0)
    span = float(max((hi - lo).max(), 1e-12))
    scale = (size - 2 * margin) / span

    def xy(p):
        # flip y so the figure follows the usual math orientation
        return _fmt(margin + (p[0] - lo[0]) * scale), _fmt(size - margin - (p[1] - lo[1]) * scale)

    ET.register_namespace("", SVG_NS)
    root = ET.Element("svg", {"xmlns": SVG_NS, "version": "1.1", "width": str(size),
                              "height": str(size), "viewBox": f"0 0 {size} {size}"})
    ET.SubElement(root, "title").text = f"{result.kind.name} partition, projection {i},{j}"

    for a, g in enumerate(G.elements):
        color = PALETTE[a % len(PALETTE)]
        grp = ET.SubElement(root, "g", {"class": "hull", "data-part": ",".join(map(str, g))})
        outline = hull_outline(pts2[list(result.parts[g])])
        coords = " ".join(",".join(xy(p)) for p in outline)
        ET.SubElement(grp, "polygon", {"points": coords, "fill": color, "fill-opacity": "0.25",
                                       "stroke": color, "stroke-width": "1"})

    labels = result.labels(cloud.n_points)
    dots = ET.SubElement(root, "g", {"class": "points"})
    for p, lab in zip(pts2, labels):
        cx, cy = xy(p)
        fill = PALETTE[lab % len(PALETTE)] if lab >= 0 else "#000000"
        ET.SubElement(dots, "circle", {"cx": cx, "cy": cy, "r": "3", "fill": fill})

    poly = ET.SubElement(root, "g", {"class": "polytope", "stroke": "#000000",
                                     "stroke-width": "1.5"})
    for a, b in polytope_edges(G):
        (x1, y1), (x2, y2) = xy(verts2[a]), xy(verts2[b])
        ET.SubElement(poly, "line", {"x1": x1, "y1": y1, "x2": x2, "y2": y2})
    for v in verts2:
        cx, cy = xy(v)
        ET.SubElement(poly, "circle", {"cx": cx, "cy": cy, "r": "2.5", "fill": "#000000"})
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"
