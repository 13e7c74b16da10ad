"""Tolerance-aware planar primitives: orientation, segment intersection,
point-in-ring.

Coordinates are 64-bit floats.  Degenerate contact (collinearity, endpoint
touches, collinear overlaps) is classified explicitly rather than perturbed
away, so downstream visibility semantics stay deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence


class Point(NamedTuple):
    x: float
    y: float


PointLike = Sequence[float]


@dataclass(frozen=True)
class Tolerance:
    """Absolute and relative length tolerances for a working scale.

    tau_abs is an absolute length; tau_rel is dimensionless.  Both must be
    positive and small relative to the scale they describe.
    """

    tau_abs: float = 1e-12
    tau_rel: float = 1e-12

    def __post_init__(self) -> None:
        if not (0.0 < self.tau_abs and math.isfinite(self.tau_abs)):
            raise ValueError(f"tau_abs must be positive and finite, got {self.tau_abs}")
        if not (0.0 < self.tau_rel <= 1e-9):
            raise ValueError(f"tau_rel must be in (0, 1e-9], got {self.tau_rel}")

    @classmethod
    def for_diagonal(cls, diag: float, rel: float = 1e-9) -> "Tolerance":
        """Default policy: tau_abs = 1e-9 x bounding-box diagonal."""
        if not (diag > 0.0 and math.isfinite(diag)):
            raise ValueError(f"diagonal must be positive and finite, got {diag}")
        return cls(tau_abs=rel * diag, tau_rel=1e-12)


def as_point(p: PointLike) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite coordinates: {p!r}")
    return Point(x, y)


# Relative threshold under which a cross product is considered zero.
_ORIENT_REL = 4e-15


def orient(a: PointLike, b: PointLike, c: PointLike) -> int:
    """Sign of the signed area of triangle abc: +1 ccw, -1 cw, 0 collinear.

    Zero is returned only when the cross product is below a threshold scaled
    by the magnitudes of the two difference vectors.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    cx, cy = float(c[0]), float(c[1])
    ux, uy = bx - ax, by - ay
    vx, vy = cx - ax, cy - ay
    det = ux * vy - uy * vx
    scale = (abs(ux) + abs(uy)) * (abs(vx) + abs(vy))
    if abs(det) <= _ORIENT_REL * scale:
        return 0
    return 1 if det > 0.0 else -1


class SegmentIntersection(NamedTuple):
    """Classification of how two segments meet.

    kind is one of "disjoint", "proper", "touch", "overlap".  points holds
    the witness point for proper/touch, or the overlap interval endpoints.
    """

    kind: str
    points: tuple[Point, ...]


def _on_segment(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> bool:
    # Assumes p collinear with ab; checks the bounding box.
    return (min(ax, bx) - 1e-300 <= px <= max(ax, bx) + 1e-300
            and min(ay, by) - 1e-300 <= py <= max(ay, by) + 1e-300)


def segment_intersection(a: PointLike, b: PointLike, c: PointLike, d: PointLike) -> SegmentIntersection:
    """Classify the intersection of closed segments ab and cd.

    Raises ValueError on a zero-length segment.
    """
    a, b, c, d = as_point(a), as_point(b), as_point(c), as_point(d)
    if a == b or c == d:
        raise ValueError("degenerate (zero-length) segment")

    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)

    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        # Proper transversal crossing; solve for the witness.
        rx, ry = b.x - a.x, b.y - a.y
        sx, sy = d.x - c.x, d.y - c.y
        denom = rx * sy - ry * sx
        t = ((c.x - a.x) * sy - (c.y - a.y) * sx) / denom
        return SegmentIntersection("proper", (Point(a.x + t * rx, a.y + t * ry),))

    touches: list[Point] = []
    if o1 == o2 == 0 and o3 == o4 == 0:
        # Collinear; project onto the dominant axis of ab.
        rx, ry = b.x - a.x, b.y - a.y
        use_x = abs(rx) >= abs(ry)

        def key(p: Point) -> float:
            return p.x if use_x else p.y

        lo_ab, hi_ab = sorted((key(a), key(b)))
        lo_cd, hi_cd = sorted((key(c), key(d)))
        lo, hi = max(lo_ab, lo_cd), min(hi_ab, hi_cd)
        if lo > hi:
            return SegmentIntersection("disjoint", ())
        pts = sorted({a, b, c, d}, key=key)
        inside = [p for p in pts if lo <= key(p) <= hi]
        if lo == hi:
            return SegmentIntersection("touch", (inside[0],))
        return SegmentIntersection("overlap", (inside[0], inside[-1]))

    # Endpoint / boundary touches: one orientation vanished.
    for p, oo, (u, v) in ((c, o1, (a, b)), (d, o2, (a, b)), (a, o3, (c, d)), (b, o4, (c, d))):
        if oo == 0 and _on_segment(p.x, p.y, u.x, u.y, v.x, v.y):
            # p lies on the other segment; the pair meets iff p is also
            # within its own segment (it is, being an endpoint).
            touches.append(p)
    if touches and (o1 != o2 or o1 == o2 == 0) and (o3 != o4 or o3 == o4 == 0):
        seen: list[Point] = []
        for p in touches:
            if not any(q == p for q in seen):
                seen.append(p)
        return SegmentIntersection("touch", tuple(seen))
    return SegmentIntersection("disjoint", ())


def point_segment_distance(p: PointLike, a: PointLike, b: PointLike) -> float:
    """Euclidean distance from p to the closed segment ab."""
    px, py = float(p[0]), float(p[1])
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / denom
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def point_in_ring(p: PointLike, ring: Sequence[PointLike], tol: Tolerance | None = None) -> str:
    """Locate p against a simple closed ring: "inside", "boundary" or "outside".

    Boundary means within tol.tau_abs of some edge.  Interior/exterior is the
    even-odd crossing rule.
    """
    tol = tol or Tolerance()
    px, py = float(p[0]), float(p[1])
    n = len(ring)
    if n < 3:
        raise ValueError("ring needs at least 3 vertices")

    for i in range(n):
        if point_segment_distance((px, py), ring[i], ring[(i + 1) % n]) <= tol.tau_abs:
            return "boundary"

    inside = False
    ax, ay = float(ring[-1][0]), float(ring[-1][1])
    for q in ring:
        bx, by = float(q[0]), float(q[1])
        if (ay > py) != (by > py):
            x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
            if px < x_cross:
                inside = not inside
        ax, ay = bx, by
    return "inside" if inside else "outside"


def ring_area(ring: Sequence[PointLike]) -> float:
    """Signed area (shoelace): positive for counterclockwise rings."""
    total = 0.0
    ax, ay = float(ring[-1][0]), float(ring[-1][1])
    for q in ring:
        bx, by = float(q[0]), float(q[1])
        total += ax * by - bx * ay
        ax, ay = bx, by
    return 0.5 * total


def is_simple_ring(ring: Sequence[PointLike]) -> tuple[bool, tuple[int, int] | None]:
    """Check a closed ring for self-intersection.

    Non-adjacent edges must be disjoint; adjacent edges may share only their
    common endpoint.  Returns (ok, offending edge-index pair).
    """
    n = len(ring)
    pts = [as_point(q) for q in ring]
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if a == b:
            return False, (i, (i + 1) % n)
        for j in range(i + 1, n):
            c, d = pts[j], pts[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            res = segment_intersection(a, b, c, d)
            if res.kind == "disjoint":
                continue
            if adjacent:
                shared = b if j == i + 1 else a
                if res.kind == "touch" and len(res.points) == 1 and res.points[0] == shared:
                    continue
                return False, (i, j)
            return False, (i, j)
    return True, None
