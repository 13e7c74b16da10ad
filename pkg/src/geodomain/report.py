"""Figure rendering and structured dumps for CLI reports.

Figures are drawn with matplotlib and written to whatever format the output
extension selects (SVG for the documented report path, PNG/PDF work too).
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Polygon as MplPolygon

from .center import CenterEstimate
from .domain import PolygonalDomain
from .geodesic import geodesic_distance
from .spm import ShortestPathMap


def _draw_domain(ax, domain: PolygonalDomain, face: str = "#f2f2f2") -> None:
    ax.add_patch(MplPolygon([(p.x, p.y) for p in domain.outer], closed=True,
                            facecolor=face, edgecolor="black", linewidth=1.2, zorder=1))
    for hole in domain.holes:
        ax.add_patch(MplPolygon([(p.x, p.y) for p in hole], closed=True,
                                facecolor="white", edgecolor="black",
                                linewidth=1.2, zorder=2))


def _finish(fig, ax, domain: PolygonalDomain, path: str) -> None:
    x0, y0, x1, y1 = domain.bbox
    pad = 0.05 * domain.bbox_diag
    ax.set_xlim(x0 - pad, x1 + pad)
    ax.set_ylim(y0 - pad, y1 + pad)
    ax.set_aspect("equal")
    ax.set_axis_off()
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def render_domain(domain: PolygonalDomain, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 7))
    _draw_domain(ax, domain)
    _finish(fig, ax, domain, path)


def render_spm(spm: ShortestPathMap, path: str) -> None:
    """Cells colored by root, bisector arcs stroked, vertices dotted."""
    domain = spm.domain
    fig, ax = plt.subplots(figsize=(8, 8))
    _draw_domain(ax, domain)
    cmap = plt.get_cmap("tab20")
    for cell in spm.cells:
        ax.add_patch(MplPolygon(cell.loop, closed=True,
                                facecolor=cmap(cell.root % 20), alpha=0.45,
                                edgecolor="none", zorder=3))
    for arc in spm.arcs:
        ax.plot(arc.polyline[:, 0], arc.polyline[:, 1],
                color="#202020", linewidth=1.4, zorder=4)
    kinds = {"corner": ("k", 8), "boundary": ("#285cc4", 14), "interior": ("#c42828", 20)}
    for v in spm.vertices:
        color, size = kinds[v.kind]
        ax.scatter([v.position.x], [v.position.y], s=size, c=color, zorder=5)
    ax.scatter([spm.source.x], [spm.source.y], marker="*", s=140,
               c="#107010", zorder=6)
    _finish(fig, ax, domain, path)


def render_center(domain: PolygonalDomain, estimate: CenterEstimate, path: str,
                  grid: np.ndarray | None = None) -> None:
    """Domain with grid candidates, the center estimate, and the polylines of
    the paths to its farthest witnesses."""
    fig, ax = plt.subplots(figsize=(8, 8))
    _draw_domain(ax, domain)
    if grid is not None and len(grid):
        ax.scatter(grid[:, 0], grid[:, 1], s=2.5, c="#9db8dd", zorder=3)
    c = estimate.point
    for w in estimate.witnesses:
        _, gpath = geodesic_distance(domain, c, w.position)
        pts = np.array(gpath.polyline())
        ax.plot(pts[:, 0], pts[:, 1], color="#c42828", linewidth=1.6, zorder=4)
        ax.scatter([w.position.x], [w.position.y], s=26, c="#c42828", zorder=5)
    ax.scatter([c.x], [c.y], marker="*", s=160, c="#107010", zorder=6)
    circle = plt.Circle((c.x, c.y), estimate.upper, fill=False,
                        linestyle=":", color="#107010", linewidth=1.0, zorder=4)
    ax.add_patch(circle)
    _finish(fig, ax, domain, path)


def spm_to_dict(spm: ShortestPathMap) -> dict:
    """Structured dump: roots, classified vertices, sampled arcs, cells."""
    return {
        "source": [spm.source.x, spm.source.y],
        "roots": [
            {"label": r.label, "position": [r.position.x, r.position.y],
             "weight": r.weight}
            for r in spm.roots
        ],
        "vertices": [
            {"position": [v.position.x, v.position.y], "kind": v.kind,
             "class": v.multiplicity_class, "distance": v.distance,
             "roots": [spm.root_label(r) for r in v.roots]}
            for v in spm.vertices
        ],
        "arcs": [
            {"roots": [spm.root_label(arc.roots[0]), spm.root_label(arc.roots[1])],
             "kind": arc.kind, "delta": arc.delta,
             "polyline": arc.polyline.tolist()}
            for arc in spm.arcs
        ],
        "cells": [
            {"root": spm.root_label(cell.root), "area": cell.area,
             "loop": cell.loop.tolist()}
            for cell in spm.cells
        ],
        "counts": {"vertices": spm.vertex_count, "edges": spm.edge_count,
                   "cells": spm.cell_count},
    }
