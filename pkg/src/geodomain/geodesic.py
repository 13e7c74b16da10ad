"""Geodesic distances and shortest paths inside a polygonal domain.

A non-direct shortest path decomposes into a straight hop to a first corner,
a corner-to-corner shortest path, and a straight hop from a last corner, so
point-to-point distances reduce to the corner visibility graph plus an
all-pairs corner distance table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sparse_dijkstra

from .domain import PolygonalDomain
from .primitives import Point, PointLike, as_point
from .visibility import segments_visible, visibility_graph, visible, visible_mask_to_corners


@dataclass(frozen=True)
class GeodesicPath:
    """Shortest path as the sequence of traversed corner indices."""

    source: Point
    target: Point
    corners: tuple[int, ...]
    points: tuple[Point, ...]
    length: float

    def polyline(self) -> list[Point]:
        return [self.source, *self.points, self.target]

    def recompute_length(self) -> float:
        pts = self.polyline()
        return sum(math.dist(pts[i], pts[i + 1]) for i in range(len(pts) - 1))


@dataclass(frozen=True)
class ShortestPathTree:
    """Distances and parent corners for shortest paths from one source.

    parent[v] is the previous corner on a shortest path from the source to
    corner v, or -1 when that path is the direct segment.  Ties pick the
    direct segment first, then the smallest corner index.
    """

    source: Point
    dist: np.ndarray
    parent: np.ndarray

    def path_to(self, v: int) -> list[int]:
        chain = [v]
        while self.parent[chain[-1]] >= 0:
            chain.append(int(self.parent[chain[-1]]))
        return chain[::-1]


def corner_distance_table(domain: PolygonalDomain) -> np.ndarray:
    """All-pairs geodesic distances between corners (cached on the domain)."""
    cache = domain._cache
    if "corner_table" in cache:
        return cache["corner_table"]  # type: ignore[return-value]
    graph = visibility_graph(domain)
    w = np.where(np.isfinite(graph.weights), graph.weights, 0.0)
    sparse = csr_matrix((w[graph.adjacency],
                         np.nonzero(graph.adjacency)),
                        shape=graph.weights.shape)
    table = _sparse_dijkstra(sparse, directed=False)
    table = np.minimum(table, table.T)
    cache["corner_table"] = table
    return table


def corner_distances_from(domain: PolygonalDomain, p: PointLike,
                          vis_mask: np.ndarray | None = None) -> np.ndarray:
    """Geodesic distance from p to every corner, as a vector.

    Composes the straight hop to each visible first corner with the corner
    distance table; equals the shortest-path-tree distances.
    """
    p = as_point(p)
    table = corner_distance_table(domain)
    if vis_mask is None:
        vis_mask = visible_mask_to_corners(domain, p)
    corners = domain.corner_array()
    hop = np.hypot(corners[:, 0] - p.x, corners[:, 1] - p.y)
    hop = np.where(vis_mask, hop, np.inf)
    return np.min(hop[:, None] + table, axis=0)


def path_length(domain: PolygonalDomain, u: int, v: int, s: PointLike, t: PointLike) -> float:
    """Length of the path class (s, u, ..., v, t): |su| + d(u,v) + |vt|.

    Requires s to see corner u and t to see corner v.
    """
    s = as_point(s)
    t = as_point(t)
    corners = domain.corner_array()
    pu = Point(*corners[u])
    pv = Point(*corners[v])
    if not visible(domain, s, pu):
        raise ValueError(f"source does not see corner {u}")
    if not visible(domain, t, pv):
        raise ValueError(f"target does not see corner {v}")
    table = corner_distance_table(domain)
    return math.dist(s, pu) + float(table[u, v]) + math.dist(pv, t)


def _require_inside(domain: PolygonalDomain, p: Point) -> None:
    if domain.contains(p) == "outside":
        raise ValueError(f"point outside domain: {p}")


def geodesic_distance(domain: PolygonalDomain, s: PointLike, t: PointLike) -> tuple[float, GeodesicPath]:
    """Geodesic distance and a canonical shortest path between two points.

    Among equal-length shortest paths the one with the lexicographically
    smallest corner-index sequence is returned (shorter sequences first).
    """
    s = as_point(s)
    t = as_point(t)
    _require_inside(domain, s)
    _require_inside(domain, t)

    if visible(domain, s, t):
        d = math.dist(s, t)
        return d, GeodesicPath(source=s, target=t, corners=(), points=(), length=d)

    corners = domain.corner_array()
    table = corner_distance_table(domain)
    vis_s = visible_mask_to_corners(domain, s)
    vis_t = visible_mask_to_corners(domain, t)
    if not vis_s.any() or not vis_t.any():
        raise ValueError("no visible corner from a query point; domain degenerate")
    hop_s = np.where(vis_s, np.hypot(corners[:, 0] - s.x, corners[:, 1] - s.y), np.inf)
    hop_t = np.where(vis_t, np.hypot(corners[:, 0] - t.x, corners[:, 1] - t.y), np.inf)
    w_s = np.min(hop_s[:, None] + table, axis=0)   # d(s, v) for every corner v
    w_t = np.min(hop_t[:, None] + table, axis=0)
    d = float(np.min(w_s + hop_t))

    corner_seq = _lex_min_path(domain, s, t, d, hop_s, hop_t, w_t)
    pts = tuple(Point(float(corners[i][0]), float(corners[i][1])) for i in corner_seq)
    return d, GeodesicPath(source=s, target=t, corners=tuple(corner_seq), points=pts, length=d)


def _lex_min_path(domain: PolygonalDomain, s: Point, t: Point, d_total: float,
                  hop_s: np.ndarray, hop_t: np.ndarray, w_t: np.ndarray) -> list[int]:
    """Greedy forward construction of the lexicographically smallest
    equal-length corner sequence."""
    graph = visibility_graph(domain)
    corners = domain.corner_array()
    tie = 1e-9 * (1.0 + d_total)
    seq: list[int] = []
    travelled = 0.0
    cur = -1  # -1 = at the source
    for _ in range(graph.n + 2):
        if cur < 0:
            hop_here = hop_s
            done = False
        else:
            hop_here = graph.weights[cur]
            pos = Point(*corners[cur])
            direct = math.dist(pos, t)
            done = (abs(travelled + direct - d_total) <= tie
                    and visible(domain, pos, t))
            if done:
                return seq
        remaining = travelled + hop_here + w_t
        candidates = np.nonzero(np.abs(remaining - d_total) <= tie)[0]
        advanced = [int(v) for v in candidates
                    if hop_here[v] > 0 and (not seq or v != seq[-1])]
        if not advanced:
            break
        nxt = min(advanced)
        travelled += float(hop_here[nxt])
        seq.append(nxt)
        cur = nxt
    raise RuntimeError("shortest-path reconstruction failed to reach the target")


def build_spt(domain: PolygonalDomain, s: PointLike) -> ShortestPathTree:
    """Shortest path tree from s to all corners over the visibility graph."""
    s = as_point(s)
    _require_inside(domain, s)
    graph = visibility_graph(domain)
    corners = domain.corner_array()
    vis = visible_mask_to_corners(domain, s)
    dist = corner_distances_from(domain, s, vis)
    hop = np.hypot(corners[:, 0] - s.x, corners[:, 1] - s.y)

    n = graph.n
    parent = np.full(n, -2, dtype=int)
    for v in range(n):
        tie = 1e-11 * (1.0 + dist[v])
        if vis[v] and abs(hop[v] - dist[v]) <= tie:
            parent[v] = -1
            continue
        through = dist + graph.weights[:, v]
        ok = np.nonzero(np.abs(through - dist[v]) <= tie)[0]
        ok = [int(u) for u in ok if u != v]
        if not ok:
            # Numerical slack fallback: closest decomposition wins.
            ok = [int(np.argmin(np.where(np.arange(n) == v, np.inf, through)))]
        parent[v] = min(ok)
    return ShortestPathTree(source=s, dist=dist, parent=parent)


def distances_from_point(domain: PolygonalDomain, p: PointLike, points: np.ndarray) -> np.ndarray:
    """Geodesic distance from p to many query points at once.

    points is (m, 2); all rows must lie in the closed domain.  Last-corner
    candidates are tested in raw-value order per point, so only a few
    visibility rows are evaluated for most points.
    """
    p = as_point(p)
    points = np.asarray(points, dtype=float)
    m = len(points)
    if m == 0:
        return np.zeros(0)
    corners = domain.corner_array()
    n = len(corners)
    w_p = corner_distances_from(domain, p)

    starts = np.repeat([[p.x, p.y]], m, axis=0)
    direct_vis = segments_visible(domain, starts, points)
    direct = np.where(direct_vis, np.hypot(points[:, 0] - p.x, points[:, 1] - p.y), np.inf)

    raw = np.hypot(points[:, 0][:, None] - corners[None, :, 0],
                   points[:, 1][:, None] - corners[None, :, 1]) + w_p[None, :]
    order = np.argsort(raw, axis=1)
    through = np.full(m, np.inf)
    unresolved = np.arange(m)
    k_lo, width = 0, 6
    while len(unresolved) and k_lo < n:
        k_hi = min(n, k_lo + width)
        cols = order[unresolved, k_lo:k_hi]
        span = k_hi - k_lo
        seg_starts = np.repeat(points[unresolved], span, axis=0)
        seg_ends = corners[cols.ravel()]
        vis = segments_visible(domain, seg_starts, seg_ends).reshape(-1, span)
        vals = np.where(vis, raw[unresolved[:, None], cols], np.inf)
        through[unresolved] = np.minimum(through[unresolved], vals.min(axis=1))
        if k_hi < n:
            next_raw = raw[unresolved, order[unresolved, k_hi]]
            still = through[unresolved] > next_raw
            unresolved = unresolved[still]
        else:
            unresolved = unresolved[:0]
        k_lo = k_hi
        width *= 2
    return np.minimum(direct, through)
