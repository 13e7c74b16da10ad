"""Polygonal domains with holes: representation, validation, containment.

A domain is one counterclockwise outer ring plus zero or more clockwise hole
rings, every ring simple, holes strictly interior and pairwise disjoint.  The
region between outer ring and holes (a closed set) is the domain.  With that
orientation convention the domain interior always lies to the left of every
directed boundary edge.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .primitives import (
    Point,
    PointLike,
    Tolerance,
    as_point,
    is_simple_ring,
    orient,
    point_in_ring,
    point_segment_distance,
    ring_area,
    segment_intersection,
)


@dataclass(frozen=True)
class Violation:
    kind: str
    ring: int | None = None          # 0 = outer, 1.. = holes
    indices: tuple[int, ...] = ()
    witness: Point | None = None

    def describe(self) -> str:
        parts = [self.kind]
        if self.ring is not None:
            parts.append(f"ring={self.ring}")
        if self.indices:
            parts.append(f"indices={list(self.indices)}")
        if self.witness is not None:
            parts.append(f"near=({self.witness.x:.6g},{self.witness.y:.6g})")
        return " ".join(parts)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = ()
    corrections: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        assert self.ok == (len(self.violations) == 0)


class PolygonalDomain:
    """Immutable validated polygonal domain.

    Construct via ``PolygonalDomain.build`` (raises on invalid input) or go
    through ``validate`` first to get a report instead of an exception.
    """

    __slots__ = ("outer", "holes", "tol", "bbox", "_corners", "_corner_array",
                 "_edges", "_cache", "__weakref__")

    def __init__(self, outer: tuple[Point, ...], holes: tuple[tuple[Point, ...], ...],
                 tol: Tolerance):
        self.outer = outer
        self.holes = holes
        self.tol = tol
        xs = [p.x for p in outer]
        ys = [p.y for p in outer]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))
        corners: list[tuple[Point, int, int]] = []
        for ri, ring in enumerate(self.rings()):
            for vi, p in enumerate(ring):
                corners.append((p, ri, vi))
        self._corners = tuple(corners)
        self._corner_array = np.array([[p.x, p.y] for p, _, _ in corners], dtype=float)
        # Directed edges (start, end, ring, index), interior to the left.
        edges: list[tuple[Point, Point, int, int]] = []
        for ri, ring in enumerate(self.rings()):
            m = len(ring)
            for vi in range(m):
                edges.append((ring[vi], ring[(vi + 1) % m], ri, vi))
        self._edges = tuple(edges)
        self._cache: dict[str, object] = {}

    # -- basic accessors -----------------------------------------------------

    def rings(self) -> tuple[tuple[Point, ...], ...]:
        return (self.outer,) + self.holes

    @property
    def n(self) -> int:
        return len(self._corners)

    @property
    def h(self) -> int:
        return len(self.holes)

    @property
    def bbox_diag(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    def corners(self) -> tuple[tuple[Point, int, int], ...]:
        """All corners as (point, ring index, vertex index), outer ring first."""
        return self._corners

    def corner_array(self) -> np.ndarray:
        """(n, 2) float array of corner coordinates, in corners() order."""
        return self._corner_array

    def edges(self) -> tuple[tuple[Point, Point, int, int], ...]:
        """Directed boundary edges (a, b, ring, index), interior on the left."""
        return self._edges

    def area(self) -> float:
        return ring_area(self.outer) + sum(ring_area(hole) for hole in self.holes)

    # -- containment ---------------------------------------------------------

    def contains(self, p: PointLike) -> str:
        """Classify p as "interior", "boundary" or "outside" the closed domain."""
        where = point_in_ring(p, self.outer, self.tol)
        if where == "outside":
            return "outside"
        if where == "boundary":
            return "boundary"
        for hole in self.holes:
            inside_hole = point_in_ring(p, hole, self.tol)
            if inside_hole == "inside":
                return "outside"
            if inside_hole == "boundary":
                return "boundary"
        return "interior"

    def _edge_geometry(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if "edge_geom" not in self._cache:
            a = np.array([[e[0].x, e[0].y] for e in self._edges])
            d = np.array([[e[1].x - e[0].x, e[1].y - e[0].y] for e in self._edges])
            len2 = np.maximum((d * d).sum(axis=1), 1e-300)
            self._cache["edge_geom"] = (a, d, len2)
        return self._cache["edge_geom"]  # type: ignore[return-value]

    def _ring_arrays(self) -> list[tuple[np.ndarray, np.ndarray]]:
        if "ring_arrays" not in self._cache:
            out = []
            for ring in self.rings():
                r = np.array([[p.x, p.y] for p in ring])
                out.append((r, np.roll(r, -1, axis=0)))
            self._cache["ring_arrays"] = out
        return self._cache["ring_arrays"]  # type: ignore[return-value]

    def boundary_distance(self, points: np.ndarray) -> np.ndarray:
        """Distance from each point to the nearest boundary edge."""
        a, d, len2 = self._edge_geometry()
        rel_x = points[:, 0][:, None] - a[None, :, 0]
        rel_y = points[:, 1][:, None] - a[None, :, 1]
        t = np.clip((rel_x * d[None, :, 0] + rel_y * d[None, :, 1]) / len2[None, :], 0.0, 1.0)
        dx = rel_x - t * d[None, :, 0]
        dy = rel_y - t * d[None, :, 1]
        return np.sqrt((dx * dx + dy * dy).min(axis=1))

    def _inside_rings_mask(self, points: np.ndarray) -> np.ndarray:
        # Even-odd parity over the whole boundary at once: points of the
        # domain cross the outer ring oddly and every hole evenly.
        if "all_ring_edges" not in self._cache:
            ra = np.vstack([a for a, _ in self._ring_arrays()])
            rb = np.vstack([b for _, b in self._ring_arrays()])
            self._cache["all_ring_edges"] = (ra, rb)
        ra, rb = self._cache["all_ring_edges"]
        return _ring_mask_arrays(points, ra, rb)

    def contains_mask(self, points: np.ndarray) -> np.ndarray:
        """Vectorized closed-domain membership for an (m, 2) array.

        Boundary points count as inside; classification within tau of an edge
        may differ from contains(), which is fine for sampling use.
        """
        inside = self._inside_rings_mask(points)
        # Points within tau of the boundary are kept (closed set).
        return inside | (self.boundary_distance(points) <= self.tol.tau_abs)

    def interior_mask(self, points: np.ndarray, margin: float | None = None) -> np.ndarray:
        """Strict interior membership, at least margin away from the boundary."""
        margin = self.tol.tau_abs if margin is None else margin
        inside = self._inside_rings_mask(points)
        return inside & (self.boundary_distance(points) > margin)

    # -- construction --------------------------------------------------------

    @staticmethod
    def build(outer: Sequence[PointLike], holes: Iterable[Sequence[PointLike]] = ()) -> "PolygonalDomain":
        domain, report = validate(outer, holes)
        if domain is None:
            raise ValueError("invalid domain: " + "; ".join(v.describe() for v in report.violations))
        return domain

    def to_dict(self) -> dict:
        return {
            "outer": [[p.x, p.y] for p in self.outer],
            "holes": [[[p.x, p.y] for p in ring] for ring in self.holes],
        }


def _points_in_ring_mask(points: np.ndarray, ring: Sequence[Point]) -> np.ndarray:
    """Even-odd inclusion of many points in one ring (boundary not handled)."""
    r = np.array([[p.x, p.y] for p in ring], dtype=float)
    return _ring_mask_arrays(points, r, np.roll(r, -1, axis=0))


def _ring_mask_arrays(points: np.ndarray, ra: np.ndarray, rb: np.ndarray) -> np.ndarray:
    px = points[:, 0][:, None]
    py = points[:, 1][:, None]
    ax, ay = ra[:, 0][None, :], ra[:, 1][None, :]
    bx, by = rb[:, 0][None, :], rb[:, 1][None, :]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
    hits = straddle & (px < x_cross)
    return hits.sum(axis=1) % 2 == 1


def _segment_distance_mask(points: np.ndarray, a: Point, b: Point, tau: float) -> np.ndarray:
    d = np.array([b.x - a.x, b.y - a.y])
    denom = float(d @ d)
    rel = points - np.array([a.x, a.y])
    t = np.clip((rel @ d) / denom, 0.0, 1.0) if denom > 0 else np.zeros(len(points))
    closest = np.array([a.x, a.y]) + t[:, None] * d
    return np.hypot(*(points - closest).T) <= tau


def _merge_collinear(ring: list[Point]) -> tuple[list[Point], bool]:
    """Drop repeated and collinear-consecutive vertices; every survivor turns."""
    out: list[Point] = []
    for p in ring:
        if out and p == out[-1]:
            continue
        out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = len(out) != len(ring)
    i = 0
    while len(out) >= 3 and i < len(out):
        a = out[i - 1]
        b = out[i]
        c = out[(i + 1) % len(out)]
        if orient(a, b, c) == 0 and abs(b.x - a.x) + abs(b.y - a.y) > 0:
            # b lies on segment ac (or a spike); drop only true pass-through points.
            if min(a.x, c.x) - 1e-12 <= b.x <= max(a.x, c.x) + 1e-12 and \
               min(a.y, c.y) - 1e-12 <= b.y <= max(a.y, c.y) + 1e-12:
                out.pop(i)
                changed = True
                i = max(i - 1, 0)
                continue
        i += 1
    return out, changed


def _ring_clearance(r1: Sequence[Point], r2: Sequence[Point]) -> float:
    """Minimum distance between two disjoint ring boundaries."""
    best = math.inf
    for p in r1:
        m = len(r2)
        for i in range(m):
            best = min(best, point_segment_distance(p, r2[i], r2[(i + 1) % m]))
    for p in r2:
        m = len(r1)
        for i in range(m):
            best = min(best, point_segment_distance(p, r1[i], r1[(i + 1) % m]))
    return best


def validate(outer: Sequence[PointLike], holes: Iterable[Sequence[PointLike]] = ()) -> tuple[PolygonalDomain | None, ValidationReport]:
    """Validate raw rings and build the domain.

    Ring orientation is auto-corrected (outer to ccw, holes to cw) before the
    checks run; corrections are noted in the report.  All failures are
    collected rather than raised.
    """
    violations: list[Violation] = []
    corrections: list[str] = []

    raw_rings: list[list[Point]] = []
    try:
        raw_rings.append([as_point(p) for p in outer])
        for hole in holes:
            raw_rings.append([as_point(p) for p in hole])
    except ValueError as exc:
        violations.append(Violation(kind=f"bad coordinates: {exc}"))
        return None, ValidationReport(ok=False, violations=tuple(violations))

    rings: list[list[Point]] = []
    for ri, ring in enumerate(raw_rings):
        if len(ring) < 3:
            violations.append(Violation("ring has fewer than 3 vertices", ring=ri))
            continue
        merged, changed = _merge_collinear(ring)
        if changed:
            corrections.append(f"ring {ri}: merged collinear/duplicate vertices")
        if len(merged) < 3:
            violations.append(Violation("ring degenerates after merging collinear vertices", ring=ri))
            continue
        area = ring_area(merged)
        if area == 0.0:
            violations.append(Violation("ring has zero area", ring=ri))
            continue
        want_ccw = ri == 0
        if (area > 0) != want_ccw:
            merged = merged[::-1]
            corrections.append(f"ring {ri}: orientation corrected to {'ccw' if want_ccw else 'cw'}")
        rings.append(merged)

    if violations:
        return None, ValidationReport(ok=False, violations=tuple(violations), corrections=tuple(corrections))

    for ri, ring in enumerate(rings):
        ok, pair = is_simple_ring(ring)
        if not ok:
            violations.append(Violation("ring is not simple", ring=ri, indices=pair or ()))
    if violations:
        return None, ValidationReport(ok=False, violations=tuple(violations), corrections=tuple(corrections))

    outer_ring = rings[0]
    hole_rings = rings[1:]
    xs = [p.x for p in outer_ring]
    ys = [p.y for p in outer_ring]
    diag = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    tol = Tolerance.for_diagonal(diag)

    # Holes strictly interior to the outer ring, with positive clearance.
    for hi, hole in enumerate(hole_rings, start=1):
        bad = next((p for p in hole if point_in_ring(p, outer_ring, tol) != "inside"), None)
        clearance = _ring_clearance(hole, outer_ring)
        if bad is not None or clearance <= tol.tau_abs:
            violations.append(Violation("hole not strictly interior to outer ring",
                                        ring=hi, witness=bad or hole[0]))

    # Holes pairwise disjoint (no crossing, touching, or nesting).
    for i in range(len(hole_rings)):
        for j in range(i + 1, len(hole_rings)):
            a, b = hole_rings[i], hole_rings[j]
            crossing = False
            for ei in range(len(a)):
                for ej in range(len(b)):
                    res = segment_intersection(a[ei], a[(ei + 1) % len(a)],
                                               b[ej], b[(ej + 1) % len(b)])
                    if res.kind != "disjoint":
                        crossing = True
                        break
                if crossing:
                    break
            nested = (point_in_ring(a[0], b, tol) != "outside"
                      or point_in_ring(b[0], a, tol) != "outside")
            if crossing or nested or _ring_clearance(a, b) <= tol.tau_abs:
                violations.append(Violation("holes intersect or touch", indices=(i + 1, j + 1)))

    if violations:
        return None, ValidationReport(ok=False, violations=tuple(violations), corrections=tuple(corrections))

    domain = PolygonalDomain(tuple(outer_ring), tuple(tuple(r) for r in hole_rings), tol)
    return domain, ValidationReport(ok=True, corrections=tuple(corrections))


# -- interchange format ------------------------------------------------------

def domain_from_dict(data: dict) -> PolygonalDomain:
    if "outer" not in data:
        raise ValueError('domain file must have an "outer" ring')
    return PolygonalDomain.build(data["outer"], data.get("holes", []))


def load_domain(path: str) -> PolygonalDomain:
    with open(path, "r", encoding="utf-8") as fh:
        return domain_from_dict(json.load(fh))


def save_domain(domain: PolygonalDomain, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(domain.to_dict(), fh, indent=1)
        fh.write("\n")
