"""Shortest path maps: cells, bisector arcs, classified vertices, and
farthest neighbors.

For a source s the map decomposes the domain into cells labelled by the last
corner of the shortest path from s (the source itself for directly visible
points).  Cell borders are additively weighted bisectors: straight lines for
equal weights, hyperbola branches in general, and degenerate rays (windows)
where the weight difference equals the focal distance.

Construction: the distance field restricted to the boundary is scanned for
owner changes (this seeds every arc component, because every non-empty cell
touches the boundary), window rays are seeded at reflex corners, and every
arc is traced through the interior until a third root takes over (an interior
vertex) or the domain boundary is hit.  Face labelling is refereed throughout
by direct evaluation of the distance field, so labelling errors surface as
detectable inconsistencies instead of silent corruption.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .domain import PolygonalDomain
from .geodesic import corner_distances_from
from .primitives import Point, PointLike, as_point, orient
from .visibility import segments_visible, visibility_graph, visible_mask_to_corners


# ---------------------------------------------------------------------------
# Public data types


@dataclass(frozen=True)
class SpmRoot:
    """A cell label: a corner index (or the source) plus its path weight."""

    index: int            # corner index, or n for the source
    position: Point
    weight: float
    is_source: bool

    @property
    def label(self) -> int | str:
        return "s" if self.is_source else self.index


@dataclass
class SpmVertex:
    """Vertex of the map with its structural class.

    kind is "corner" (a domain corner), "boundary" (endpoint of a bisector
    edge on the domain boundary) or "interior" (three or more cells meet).
    roots holds realizing root indices; multiplicity counts distinct shortest
    paths from the source (the vertex's own corner does not count as a path).
    """

    position: Point
    kind: str
    distance: float
    roots: tuple[int, ...] = ()
    corner: int | None = None

    @property
    def multiplicity(self) -> int:
        realizing = [r for r in self.roots if self.corner is None or r != self.corner]
        return max(1, len(realizing))

    @property
    def multiplicity_class(self) -> str:
        return {"corner": "corner", "boundary": "boundary-endpoint"}.get(self.kind, "interior-triple")


@dataclass
class BisectorArc:
    """One bisector edge of the map between two root cells."""

    roots: tuple[int, int]
    kind: str                      # "line" | "hyperbola" | "ray"
    start_vertex: int
    end_vertex: int
    polyline: np.ndarray           # (m, 2) points sampled exactly on the curve
    foci: tuple[Point, Point]
    delta: float                   # weight difference between the two roots


@dataclass
class SpmCell:
    root: int
    loop: np.ndarray               # closed polyline (last point != first)
    area: float


@dataclass
class BoundaryPiece:
    """A boundary sub-segment between consecutive map vertices."""

    edge: int                      # index into domain.edges()
    start_vertex: int
    end_vertex: int
    owner: int


@dataclass
class ShortestPathMap:
    domain: PolygonalDomain
    source: Point
    roots: list[SpmRoot]
    weights: np.ndarray            # (n+1,) root weights, source last
    vertices: list[SpmVertex]
    arcs: list[BisectorArc]
    boundary_pieces: list[BoundaryPiece]
    cells: list[SpmCell] = field(default_factory=list)
    source_root: int = -1

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.arcs) + len(self.boundary_pieces)

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    def root_label(self, index: int) -> int | str:
        return self.roots[index].label


# ---------------------------------------------------------------------------
# Bisector curves.  Parameterized so point(psi) is exactly on the locus
# "weighted distance to both foci equal"; psi grows along the curve.


class _LineBisector:
    kind = "line"

    def __init__(self, mid: np.ndarray, ev: np.ndarray):
        self.mid = mid
        self.ev = ev                 # unit direction along the line

    def point(self, psi: float) -> np.ndarray:
        return self.mid + psi * self.ev

    def tangent(self, psi: float) -> np.ndarray:
        return self.ev

    def param_of(self, xy: np.ndarray) -> float:
        return float((np.asarray(xy) - self.mid) @ self.ev)

    def dpsi(self, psi: float, h: float) -> float:
        return h

    def segment_hits(self, a: np.ndarray, b: np.ndarray) -> list[tuple[float, float]]:
        eu = np.array([self.ev[1], -self.ev[0]])
        du = float((b - a) @ eu)
        if abs(du) < 1e-300:
            return []
        t = float((self.mid - a) @ eu) / du
        if -1e-12 <= t <= 1.0 + 1e-12:
            t = min(1.0, max(0.0, t))
            return [(t, self.param_of(a + t * (b - a)))]
        return []


class _RayBisector:
    kind = "ray"

    def __init__(self, apex: np.ndarray, direction: np.ndarray):
        self.apex = apex
        self.dir = direction

    def point(self, psi: float) -> np.ndarray:
        return self.apex + psi * self.dir

    def tangent(self, psi: float) -> np.ndarray:
        return self.dir

    def param_of(self, xy: np.ndarray) -> float:
        return float((np.asarray(xy) - self.apex) @ self.dir)

    def dpsi(self, psi: float, h: float) -> float:
        return h

    def segment_hits(self, a: np.ndarray, b: np.ndarray) -> list[tuple[float, float]]:
        nrm = np.array([self.dir[1], -self.dir[0]])
        dv = float((b - a) @ nrm)
        if abs(dv) < 1e-300:
            return []
        t = float((self.apex - a) @ nrm) / dv
        if not (-1e-12 <= t <= 1.0 + 1e-12):
            return []
        t = min(1.0, max(0.0, t))
        psi = self.param_of(a + t * (b - a))
        if psi < -1e-12:
            return []
        return [(t, psi)]


class _HyperbolaBisector:
    kind = "hyperbola"

    def __init__(self, mid: np.ndarray, eu: np.ndarray, ev: np.ndarray, a: float, b: float):
        self.mid = mid
        self.eu = eu
        self.ev = ev
        self.a = a                   # signed; branch opens towards sign(a)
        self.b = b

    def point(self, psi: float) -> np.ndarray:
        return self.mid + (self.a * math.cosh(psi)) * self.eu \
            + (self.b * math.sinh(psi)) * self.ev

    def tangent(self, psi: float) -> np.ndarray:
        return (self.a * math.sinh(psi)) * self.eu + (self.b * math.cosh(psi)) * self.ev

    def param_of(self, xy: np.ndarray) -> float:
        v = float((np.asarray(xy) - self.mid) @ self.ev)
        return math.asinh(v / self.b)

    def dpsi(self, psi: float, h: float) -> float:
        speed = math.hypot(self.a * math.sinh(psi), self.b * math.cosh(psi))
        return h / max(speed, 1e-300)

    def segment_hits(self, a_pt: np.ndarray, b_pt: np.ndarray) -> list[tuple[float, float]]:
        rel = a_pt - self.mid
        d = b_pt - a_pt
        u0, du = float(rel @ self.eu), float(d @ self.eu)
        v0, dv = float(rel @ self.ev), float(d @ self.ev)
        aa, bb = self.a * self.a, self.b * self.b
        c2 = bb * du * du - aa * dv * dv
        c1 = 2.0 * (bb * u0 * du - aa * v0 * dv)
        c0 = bb * u0 * u0 - aa * v0 * v0 - aa * bb
        ts: list[float] = []
        if abs(c2) <= 1e-16 * (abs(c1) + abs(c0)):
            if abs(c1) > 1e-300:
                ts = [-c0 / c1]
        else:
            disc = c1 * c1 - 4.0 * c2 * c0
            if disc >= 0.0:
                sq = math.sqrt(disc)
                if c1 >= 0:
                    q = -0.5 * (c1 + sq)
                else:
                    q = -0.5 * (c1 - sq)
                ts = []
                if abs(c2) > 0:
                    ts.append(q / c2)
                if abs(q) > 0:
                    ts.append(c0 / q)
        hits: list[tuple[float, float]] = []
        for t in ts:
            if not (-1e-12 <= t <= 1.0 + 1e-12):
                continue
            u = u0 + t * du
            if u * self.a <= 0.0:
                continue             # wrong branch of the hyperbola
            v = v0 + t * dv
            t = min(1.0, max(0.0, t))
            hits.append((t, math.asinh(v / self.b)))
        hits.sort()
        return hits


def _make_bisector(p1: np.ndarray, w1: float, p2: np.ndarray, w2: float, scale: float):
    """Bisector of two weighted roots, or None when the locus is empty."""
    dvec = p2 - p1
    dist = float(np.hypot(*dvec))
    if dist <= 1e-14 * scale:
        return None
    delta = w2 - w1
    if abs(delta) > dist + 1e-9 * scale:
        return None
    eu = dvec / dist
    ev = np.array([-eu[1], eu[0]])
    mid = 0.5 * (p1 + p2)
    half = 0.5 * dist
    a = 0.5 * delta
    b_sq = half * half - a * a
    if b_sq <= (1e-6 * half) ** 2:
        # Window ray: the extension beyond the farther-weighted root.
        if delta >= 0.0:
            return _RayBisector(apex=p2.astype(float).copy(), direction=eu.copy())
        return _RayBisector(apex=p1.astype(float).copy(), direction=(-eu).copy())
    if abs(delta) <= 1e-12 * scale:
        return _LineBisector(mid=mid, ev=ev)
    return _HyperbolaBisector(mid=mid, eu=eu, ev=ev, a=a, b=math.sqrt(b_sq))


# ---------------------------------------------------------------------------
# Construction


class _VertexRegistry:
    def __init__(self, merge_radius: float):
        self.radius = merge_radius
        self.positions: list[np.ndarray] = []
        self.vertices: list[SpmVertex] = []

    def find(self, xy: np.ndarray, radius: float | None = None) -> int | None:
        radius = self.radius if radius is None else radius
        for i, p in enumerate(self.positions):
            if abs(p[0] - xy[0]) <= radius and abs(p[1] - xy[1]) <= radius:
                if math.hypot(p[0] - xy[0], p[1] - xy[1]) <= radius:
                    return i
        return None

    def add(self, xy: np.ndarray, kind: str, distance: float,
            roots: tuple[int, ...] = (), corner: int | None = None,
            snap_radius: float | None = None) -> int:
        xy = np.asarray(xy, dtype=float)
        found = self.find(xy)
        if found is None and snap_radius is not None:
            # Near-tangential junctions smear a tie over a short stretch;
            # vertices there snap together when they share two roots.
            best = None
            for i, p in enumerate(self.positions):
                d = math.hypot(p[0] - xy[0], p[1] - xy[1])
                if d <= snap_radius and len(set(self.vertices[i].roots) & set(roots)) >= 2:
                    if best is None or d < best[0]:
                        best = (d, i)
            if best is not None:
                found = best[1]
        if found is not None:
            v = self.vertices[found]
            v.roots = tuple(sorted(set(v.roots) | set(roots)))
            return found
        self.positions.append(xy)
        self.vertices.append(SpmVertex(position=Point(float(xy[0]), float(xy[1])),
                                       kind=kind, distance=distance,
                                       roots=tuple(sorted(set(roots))), corner=corner))
        return len(self.vertices) - 1


@dataclass
class _Breakpoint:
    edge: int
    t: float
    pair: tuple[int, int]
    vertex: int


class _SpmBuilder:
    MAX_STEPS = 8000

    def __init__(self, domain: PolygonalDomain, source: Point):
        if domain.contains(source) == "outside":
            raise ValueError(f"source outside domain: {source}")
        self.domain = domain
        self.source = source
        self.diag = domain.bbox_diag
        self.tau = domain.tol.tau_abs
        self.corners = domain.corner_array()
        self.n = len(self.corners)
        self.SRC = self.n
        w = corner_distances_from(domain, source)
        self.root_pos = np.vstack([self.corners, [[source.x, source.y]]])
        self.w = np.append(w, 0.0)
        d_to_corners = np.hypot(self.corners[:, 0] - source.x, self.corners[:, 1] - source.y)
        nearest = int(np.argmin(d_to_corners))
        # A source sitting on a corner keeps the corner as its label.
        self.source_alias: int | None = nearest if d_to_corners[nearest] <= self.tau else None
        active = [i for i in range(self.n + 1)
                  if not (self.source_alias is not None and i == self.SRC)]
        self.active_arr = np.array(active)
        # Near-degenerate ties produce clusters of vertices; merging at this
        # radius collapses them into single higher-order vertices.
        self.registry = _VertexRegistry(merge_radius=max(self.tau, 1e-5 * self.diag))
        self.breakpoints: dict[int, list[_Breakpoint]] = defaultdict(list)
        self.arcs: list[BisectorArc] = []
        self._arc_seen: set[tuple[frozenset, int]] = set()
        self._arc_emitted: set[tuple[frozenset, int]] = set()
        self._queue: list[tuple[int, int, np.ndarray, int, np.ndarray]] = []
        self.take_tol = 1e-11 * self.diag
        self._edges = domain.edges()
        e1 = np.array([[e[0].x, e[0].y] for e in self._edges])
        e2 = np.array([[e[1].x, e[1].y] for e in self._edges])
        self._ebox_lo = np.minimum(e1, e2)
        self._ebox_hi = np.maximum(e1, e2)

    # -- distance-field referee ----------------------------------------------

    def root_values(self, xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(values, visibility) of every root at one interior point."""
        vals, vis = self.root_values_many(np.asarray(xy, dtype=float)[None, :])
        return vals[0], vis[0]

    def root_values_many(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(values, visibility) of every root at several points: (m, n+1)."""
        roots = self.root_pos[self.active_arr]
        m = len(pts)
        starts = np.repeat(pts, len(roots), axis=0)
        ends = np.tile(roots, (m, 1))
        vis_active = segments_visible(self.domain, starts, ends).reshape(m, len(roots))
        vis = np.zeros((m, self.n + 1), dtype=bool)
        vis[:, self.active_arr] = vis_active
        dist = np.hypot(pts[:, 0][:, None] - self.root_pos[None, :, 0],
                        pts[:, 1][:, None] - self.root_pos[None, :, 1])
        vals = np.where(vis, self.w[None, :] + dist, np.inf)
        return vals, vis

    def owner_at(self, xy: np.ndarray) -> tuple[int, float]:
        """Distance-field owner with top-K pruning.

        Only roots whose raw value could beat the best visible candidate are
        tested; if every tested root is blocked the scan widens.
        """
        xy = np.asarray(xy, dtype=float)
        raw = self.w + np.hypot(self.root_pos[:, 0] - xy[0], self.root_pos[:, 1] - xy[1])
        masked = raw.copy()
        inactive = np.ones(self.n + 1, dtype=bool)
        inactive[self.active_arr] = False
        masked[inactive] = np.inf
        order = np.argsort(masked)
        k = 10
        while True:
            head = order[:k]
            head = head[np.isfinite(masked[head])]
            pts = self.root_pos[head]
            starts = np.repeat(xy[None, :], len(pts), axis=0)
            vis = segments_visible(self.domain, starts, pts)
            vals = np.where(vis, raw[head], np.inf)
            best = int(np.argmin(vals))
            threshold = masked[order[k]] if k < len(order) else np.inf
            if vals[best] <= threshold:
                return int(head[best]), float(vals[best])
            if k >= len(order):
                return int(head[best]), float(vals[best])
            k = min(len(order), k * 3)

    def value_of(self, root: int, xy) -> float:
        return float(self.w[root] + math.hypot(self.root_pos[root][0] - xy[0],
                                               self.root_pos[root][1] - xy[1]))

    def root_values_pruned(self, xy: np.ndarray, r1: int, r2: int):
        """Like root_values but testing only plausible roots.

        Returns (values, visibility, threshold): entries outside the tested
        head are +inf/False, and every untested root is guaranteed to have a
        true value above the threshold.
        """
        xy = np.asarray(xy, dtype=float)
        raw = self.w + np.hypot(self.root_pos[:, 0] - xy[0], self.root_pos[:, 1] - xy[1])
        masked = raw.copy()
        inactive = np.ones(self.n + 1, dtype=bool)
        inactive[self.active_arr] = False
        masked[inactive] = np.inf
        order = np.argsort(masked)
        total = int(np.isfinite(masked).sum())
        k = min(12, total)
        while True:
            head = [int(i) for i in order[:k]]
            for r in (r1, r2):
                if r not in head and not inactive[r]:
                    head.append(r)
            head_arr = np.array(head)
            pts = self.root_pos[head_arr]
            starts = np.repeat(xy[None, :], len(pts), axis=0)
            vis_head = segments_visible(self.domain, starts, pts)
            vals = np.full(self.n + 1, np.inf)
            vis = np.zeros(self.n + 1, dtype=bool)
            vis[head_arr] = vis_head
            vals[head_arr[vis_head]] = raw[head_arr[vis_head]]
            threshold = float(masked[order[k]]) if k < total else math.inf
            others = vals.copy()
            others[r1] = np.inf
            others[r2] = np.inf
            if float(others.min()) <= threshold or k >= total:
                return vals, vis, threshold
            k = min(total, k * 3)

    # -- boundary scan ---------------------------------------------------

    def _boundary_assets(self):
        cache = self.domain._cache
        if "spm_boundary_samples" not in cache:
            edges = self._edges
            lengths = np.array([math.dist((a.x, a.y), (b.x, b.y)) for a, b, _, _ in edges])
            unit = max(lengths.sum() / (12.0 * max(len(edges), 1)), 1e-12)
            eta = 1e-7 * self.diag
            params, pts_all, nudged_all, edge_of = [], [], [], []
            for ei, (a, b, _, _) in enumerate(edges):
                k = int(np.clip(math.ceil(lengths[ei] / unit), 6, 64))
                t = np.concatenate([[0.004], (np.arange(k) + 0.5) / k, [0.996]])
                dx, dy = b.x - a.x, b.y - a.y
                ln = math.hypot(dx, dy)
                px = a.x + t * dx
                py = a.y + t * dy
                params.append(t)
                pts_all.append(np.column_stack([px, py]))
                nudged_all.append(np.column_stack([px - eta * dy / ln, py + eta * dx / ln]))
                edge_of.extend([ei] * len(t))
            nudged = np.vstack(nudged_all)
            corners = self.domain.corner_array()
            seg_starts = np.repeat(nudged, len(corners), axis=0)
            seg_ends = np.tile(corners, (len(nudged), 1))
            vis = segments_visible(self.domain, seg_starts, seg_ends)
            vis = vis.reshape(len(nudged), len(corners))
            dist = np.hypot(nudged[:, 0][:, None] - corners[None, :, 0],
                            nudged[:, 1][:, None] - corners[None, :, 1])
            cache["spm_boundary_samples"] = {
                "params": params, "points": np.vstack(pts_all), "nudged": nudged,
                "edge_of": np.array(edge_of), "vis": vis, "dist": dist,
            }
        return cache["spm_boundary_samples"]

    def _sample_owners(self, assets) -> np.ndarray:
        nudged = assets["nudged"]
        m = len(nudged)
        vals = np.where(assets["vis"], assets["dist"] + self.w[None, :self.n], np.inf)
        if self.source_alias is None:
            src = np.repeat([[self.source.x, self.source.y]], m, axis=0)
            vis_src = segments_visible(self.domain, nudged, src)
            d_src = np.hypot(nudged[:, 0] - self.source.x, nudged[:, 1] - self.source.y)
            src_col = np.where(vis_src, d_src, np.inf)[:, None]
        else:
            src_col = np.full((m, 1), np.inf)
        return np.argmin(np.concatenate([vals, src_col], axis=1), axis=1)

    def scan_boundary(self) -> None:
        assets = self._boundary_assets()
        owners = self._sample_owners(assets)
        offset = 0
        gaps: list[tuple[int, float, float, int]] = []
        for ei in range(len(self._edges)):
            t = assets["params"][ei]
            own = owners[offset:offset + len(t)]
            offset += len(t)
            for i in range(len(t) - 1):
                if own[i] != own[i + 1]:
                    self._resolve(ei, float(t[i]), float(t[i + 1]), int(own[i]), int(own[i + 1]), 0)
                else:
                    gaps.append((ei, float(t[i]), float(t[i + 1]), int(own[i])))
        # Midpoint probe of every same-owner gap catches narrow cells.
        if gaps:
            probes = np.array([self._edge_point_nudged(ei, 0.5 * (ta + tb))
                               for ei, ta, tb, _ in gaps])
            probe_owners = self.owners_batch(probes)
            for (ei, ta, tb, o), om in zip(gaps, probe_owners):
                if om != o:
                    tm = 0.5 * (ta + tb)
                    self._resolve(ei, ta, tm, o, int(om), 0)
                    self._resolve(ei, tm, tb, int(om), o, 0)

    def owners_batch(self, pts: np.ndarray) -> np.ndarray:
        """Distance-field owners of many points, tested in raw-value order."""
        pts = np.asarray(pts, dtype=float)
        m = len(pts)
        raw = self.w[None, :] + np.hypot(pts[:, 0][:, None] - self.root_pos[None, :, 0],
                                         pts[:, 1][:, None] - self.root_pos[None, :, 1])
        inactive = np.ones(self.n + 1, dtype=bool)
        inactive[self.active_arr] = False
        raw[:, inactive] = np.inf
        order = np.argsort(raw, axis=1)
        owner = np.zeros(m, dtype=int)
        best = np.full(m, np.inf)
        unresolved = np.arange(m)
        k_lo, width = 0, 8
        R = self.n + 1
        while len(unresolved) and k_lo < R:
            k_hi = min(R, k_lo + width)
            cols = order[unresolved, k_lo:k_hi]
            span = k_hi - k_lo
            starts = np.repeat(pts[unresolved], span, axis=0)
            ends = self.root_pos[cols.ravel()]
            vis = segments_visible(self.domain, starts, ends).reshape(-1, span)
            vals = np.where(vis, raw[unresolved[:, None], cols], np.inf)
            j = np.argmin(vals, axis=1)
            v = vals[np.arange(len(unresolved)), j]
            upd = v < best[unresolved]
            owner[unresolved[upd]] = cols[np.nonzero(upd)[0], j[upd]]
            best[unresolved] = np.minimum(best[unresolved], v)
            if k_hi < R:
                nxt = raw[unresolved, order[unresolved, k_hi]]
                still = best[unresolved] > nxt
                unresolved = unresolved[still]
            else:
                unresolved = unresolved[:0]
            k_lo = k_hi
            width *= 2
        return owner

    def _edge_point(self, ei: int, t: float) -> np.ndarray:
        a, b, _, _ = self._edges[ei]
        return np.array([a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)])

    def _edge_point_nudged(self, ei: int, t: float) -> np.ndarray:
        a, b, _, _ = self._edges[ei]
        dx, dy = b.x - a.x, b.y - a.y
        ln = math.hypot(dx, dy)
        eta = 1e-7 * self.diag
        return np.array([a.x + t * dx - eta * dy / ln, a.y + t * dy + eta * dx / ln])

    def _resolve(self, ei: int, t_lo: float, t_hi: float, r_lo: int, r_hi: int, depth: int) -> None:
        """Find the owner changes of edge ei inside (t_lo, t_hi)."""
        if r_lo == r_hi or depth > 28:
            return
        if t_hi - t_lo < 1e-12:
            self._record_breakpoint(ei, 0.5 * (t_lo + t_hi), r_lo, r_hi)
            return
        a, b, _, _ = self._edges[ei]
        av = np.array([a.x, a.y])
        bv = np.array([b.x, b.y])
        curve = _make_bisector(self.root_pos[r_lo], self.w[r_lo],
                               self.root_pos[r_hi], self.w[r_hi], self.diag)
        tc: float | None = None
        if curve is not None:
            inside = [t for t, _ in curve.segment_hits(av, bv) if t_lo < t < t_hi]
            if inside:
                tc = inside[0]
        if tc is None:
            tc = self._bisect_tie(ei, t_lo, t_hi, r_lo, r_hi)
        if tc is None:
            # No value tie of the endpoint owners: a third cell intervenes.
            tm = 0.5 * (t_lo + t_hi)
            om, _ = self.owner_at(self._edge_point_nudged(ei, tm))
            if om == r_lo:
                self._resolve(ei, tm, t_hi, r_lo, r_hi, depth + 1)
            elif om == r_hi:
                self._resolve(ei, t_lo, tm, r_lo, r_hi, depth + 1)
            else:
                self._resolve(ei, t_lo, tm, r_lo, int(om), depth + 1)
                self._resolve(ei, tm, t_hi, int(om), r_hi, depth + 1)
            return
        xy_n = self._edge_point_nudged(ei, tc)
        o, oval = self.owner_at(xy_n)
        if o not in (r_lo, r_hi) and oval < self.value_of(r_lo, xy_n) - 4.0 * self.take_tol:
            self._resolve(ei, t_lo, tc, r_lo, int(o), depth + 1)
            self._resolve(ei, tc, t_hi, int(o), r_hi, depth + 1)
            return
        self._record_breakpoint(ei, tc, r_lo, r_hi)
        # Probe both halves once in case further intervals hide there.
        for ta, tb, ra, rb in ((t_lo, tc, r_lo, r_lo), (tc, t_hi, r_hi, r_hi)):
            if tb - ta <= 1e-9:
                continue
            tm = 0.5 * (ta + tb)
            om, _ = self.owner_at(self._edge_point_nudged(ei, tm))
            if om != ra:
                self._resolve(ei, ta, tm, ra, int(om), depth + 1)
                self._resolve(ei, tm, tb, int(om), rb, depth + 1)

    def _bisect_tie(self, ei: int, t_lo: float, t_hi: float, r1: int, r2: int) -> float | None:
        def g(t: float) -> float:
            xy = self._edge_point(ei, t)
            return self.value_of(r1, xy) - self.value_of(r2, xy)

        g_lo, g_hi = g(t_lo), g(t_hi)
        if g_lo == 0.0:
            return t_lo
        if g_hi == 0.0:
            return t_hi
        if g_lo * g_hi > 0.0:
            return None
        return float(brentq(g, t_lo, t_hi, xtol=1e-14, maxiter=120))

    def _record_breakpoint(self, ei: int, t: float, r1: int, r2: int) -> None:
        xy = self._edge_point(ei, t)
        val = min(self.value_of(r1, xy), self.value_of(r2, xy))
        vid = self.registry.add(xy, kind="boundary", distance=val, roots=(r1, r2))
        self.breakpoints[ei].append(_Breakpoint(edge=ei, t=t,
                                                pair=(min(r1, r2), max(r1, r2)), vertex=vid))
        a, b, _, _ = self._edges[ei]
        dx, dy = b.x - a.x, b.y - a.y
        ln = math.hypot(dx, dy)
        inward = np.array([-dy / ln, dx / ln])
        self._enqueue(r1, r2, xy, vid, inward)

    # -- seeding ---------------------------------------------------------

    def _enqueue(self, r1: int, r2: int, xy: np.ndarray, vid: int, direction: np.ndarray) -> None:
        key = (frozenset((r1, r2)), vid)
        if key in self._arc_seen:
            return
        self._arc_seen.add(key)
        self._queue.append((r1, r2, xy, vid, direction))

    def seed_corners(self) -> None:
        for v in range(self.n):
            self.registry.add(self.corners[v], kind="corner", distance=float(self.w[v]),
                              roots=(v,), corner=v)

    def seed_windows(self) -> None:
        """Seed the window ray of every corner whose shadow is non-empty.

        A window extends the incoming shortest-path direction past the
        corner; it exists whenever that extension enters the domain (which
        the probe decides, independent of the corner's convexity).
        """
        graph = visibility_graph(self.domain)
        vis_src = None
        if self.source_alias is None:
            vis_src = visible_mask_to_corners(self.domain, self.source)
        eta = 1e-6 * self.diag
        cand: list[tuple[int, int, np.ndarray, np.ndarray]] = []
        for v in range(self.n):
            parent = self._parent_root(v, graph, vis_src)
            if parent is None:
                continue
            d = self.corners[v] - self.root_pos[parent]
            ln = math.hypot(*d)
            if ln <= self.tau:
                continue
            direction = d / ln
            cand.append((v, parent, direction, self.corners[v] + eta * direction))
        if not cand:
            return
        probes = np.array([c[3] for c in cand])
        inside = self.domain.interior_mask(probes, margin=1e-9 * self.diag)
        keep = [c for c, ok in zip(cand, inside) if ok]
        if not keep:
            return
        owners = self.owners_batch(np.array([c[3] for c in keep]))
        for (v, parent, direction, probe), o in zip(keep, owners):
            if o not in (parent, v):
                oval = self.value_of(int(o), probe)
                if oval < self.value_of(v, probe) - 4.0 * self.take_tol:
                    continue
            vid = self.registry.find(self.corners[v])
            assert vid is not None
            self._enqueue(parent, v, self.corners[v].copy(), vid, direction)

    def _parent_root(self, v: int, graph, vis_src) -> int | None:
        tie = 1e-11 * (1.0 + self.w[v])
        if vis_src is not None and vis_src[v]:
            hop = math.dist(self.source, tuple(self.corners[v]))
            if abs(hop - self.w[v]) <= tie:
                return self.SRC
        through = self.w[:self.n] + graph.weights[:, v]
        ok = [int(u) for u in np.nonzero(np.abs(through - self.w[v]) <= tie)[0] if u != v]
        return min(ok) if ok else None

    # -- arc tracing -----------------------------------------------------

    def trace_all(self) -> None:
        guard = 40 * max(self.n, 4)
        while self._queue:
            if len(self.arcs) > guard:
                raise RuntimeError("shortest path map exceeded its arc budget; "
                                   "degenerate input suspected")
            r1, r2, xy, vid, direction = self._queue.pop()
            self._trace_arc(r1, r2, xy, vid, direction)

    def _pair_margin(self, r1: int, r2: int, xy: np.ndarray) -> tuple[float, int, bool]:
        """Advantage of the pair over the best other visible root at xy."""
        vals, vis, _ = self.root_values_pruned(np.asarray(xy, dtype=float), r1, r2)
        pair_val = min(vals[r1], vals[r2])
        pair_vis = bool(vis[r1] and vis[r2])
        vals[r1] = np.inf
        vals[r2] = np.inf
        q = int(np.argmin(vals))
        if not np.isfinite(vals[q]):
            return math.inf, -1, pair_vis
        if not math.isfinite(pair_val):
            return -math.inf, q, pair_vis
        return float(vals[q] - pair_val), q, pair_vis

    def _pair_margin_many(self, r1: int, r2: int, pts: np.ndarray):
        vals, vis = self.root_values_many(pts)
        pair_val = np.minimum(vals[:, r1], vals[:, r2])
        pair_vis = vis[:, r1] & vis[:, r2]
        vals[:, r1] = np.inf
        vals[:, r2] = np.inf
        q = np.argmin(vals, axis=1)
        best_other = vals[np.arange(len(pts)), q]
        with np.errstate(invalid="ignore"):
            margin = np.where(np.isfinite(best_other),
                              np.where(np.isfinite(pair_val), best_other - pair_val, -np.inf),
                              np.inf)
        return margin, q, pair_vis

    def _pair_margin_pack(self, r1: int, r2: int, pts: np.ndarray, span: float):
        """Pack margins with candidate pruning.

        Raw (visibility-free) values lower-bound the true values, so any root
        whose raw margin exceeds twice the pack span cannot tie the pair
        within it while the pair stays visible; pair invisibility is reported
        separately and ends the pack walk anyway.
        """
        raw = self.w[None, :] + np.hypot(
            pts[:, 0][:, None] - self.root_pos[None, :, 0],
            pts[:, 1][:, None] - self.root_pos[None, :, 1])
        pair_raw = np.minimum(raw[:, r1], raw[:, r2])
        loose = (raw - pair_raw[:, None] <= 2.0 * span + 1e-9 * self.diag).any(axis=0)
        loose[r1] = loose[r2] = True
        active_mask = np.zeros(self.n + 1, dtype=bool)
        active_mask[self.active_arr] = True
        cand = np.nonzero(loose & active_mask)[0]

        m = len(pts)
        roots = self.root_pos[cand]
        starts = np.repeat(pts, len(cand), axis=0)
        ends = np.tile(roots, (m, 1))
        vis_c = segments_visible(self.domain, starts, ends).reshape(m, len(cand))
        vals = np.where(vis_c, raw[:, cand], np.inf)

        c1 = int(np.nonzero(cand == r1)[0][0])
        c2 = int(np.nonzero(cand == r2)[0][0])
        pair_val = np.minimum(vals[:, c1], vals[:, c2])
        pair_vis = vis_c[:, c1] & vis_c[:, c2]
        vals[:, c1] = np.inf
        vals[:, c2] = np.inf
        qi = np.argmin(vals, axis=1)
        best_other = vals[np.arange(m), qi]
        with np.errstate(invalid="ignore"):
            margin = np.where(np.isfinite(best_other),
                              np.where(np.isfinite(pair_val), best_other - pair_val, -np.inf),
                              np.inf)
        q = cand[qi]
        return margin, q, pair_vis

    def _all_boundary_hits(self, curve, sgn: float) -> list[tuple[float, int, float, float]]:
        """Every boundary crossing of the curve as (sgn*psi, edge, t, psi)."""
        out = []
        for ei, (a, b, _, _) in enumerate(self._edges):
            av = np.array([a.x, a.y])
            bv = np.array([b.x, b.y])
            for t, psi in curve.segment_hits(av, bv):
                out.append((sgn * psi, ei, t, psi))
        out.sort()
        return out

    def _trace_arc(self, r1: int, r2: int, start: np.ndarray, start_vid: int,
                   direction: np.ndarray) -> None:
        if (frozenset((r1, r2)), start_vid) in self._arc_emitted:
            return
        curve = _make_bisector(self.root_pos[r1], self.w[r1],
                               self.root_pos[r2], self.w[r2], self.diag)
        if curve is None:
            return
        psi0 = curve.param_of(start)
        tan = curve.tangent(psi0)
        tn = math.hypot(*tan)
        if tn <= 0.0:
            return
        sgn = 1.0 if float(tan @ direction) >= 0.0 else -1.0

        h_launch = 1e-6 * self.diag
        candidates = []
        for attempt_sign in (sgn, -sgn):
            for shrink in (1.0, 0.1):
                psi1 = psi0 + attempt_sign * curve.dpsi(psi0, h_launch * shrink)
                if curve.kind == "ray" and psi1 < 0.0:
                    continue
                x1 = curve.point(psi1)
                if self.domain.contains(tuple(x1)) == "outside":
                    continue
                m1, _, vis1 = self._pair_margin(r1, r2, x1)
                if vis1 and m1 > -8.0 * self.take_tol:
                    candidates.append((m1, attempt_sign, psi1, x1))
                    break
        if not candidates:
            return
        # Near-tangent spawns can pass the slack test on the wrong side; the
        # better margin picks the side where the pair genuinely wins.
        _, sgn, psi, x = max(candidates, key=lambda c: c[0])

        samples = [start.copy(), x.copy()]
        all_hits = self._all_boundary_hits(curve, sgn)
        hit_s_arr = np.array([hh[0] for hh in all_hits])
        s_launch = sgn * psi
        # The apex of a window ray is the farther root itself; in march
        # coordinates it caps sgn*psi at zero when approached from below.
        s_apex = 0.0 if (curve.kind == "ray" and sgn < 0) else math.inf

        def point_at(s: float) -> np.ndarray:
            return curve.point(sgn * s)

        def pair_formula(xy: np.ndarray) -> float:
            return min(self.value_of(r1, xy), self.value_of(r2, xy))

        s_cur = s_launch
        vals, vis, thr = self.root_values_pruned(x, r1, r2)
        floor = 2.5e-4 * self.diag

        for _ in range(self.MAX_STEPS):
            pair_vis = bool(vis[r1] and vis[r2])
            pair_val = min(vals[r1], vals[r2])
            masked = vals.copy()
            masked[r1] = np.inf
            masked[r2] = np.inf
            q = int(np.argmin(masked))
            m = float(masked[q] - pair_val) if math.isfinite(masked[q]) else math.inf
            if (not pair_vis) or m < -self.take_tol:
                end = self._solve_takeover(curve, r1, r2, sgn, sgn * psi0, s_cur,
                                           q if math.isfinite(masked[q]) else -1)
                if end is not None:
                    self._finish_interior(curve, r1, r2, start_vid, samples, *end)
                return
            masked[q] = np.inf
            q2 = int(np.argmin(masked))
            m2 = float(min(masked[q2], thr) - pair_val) \
                if math.isfinite(min(masked[q2], thr)) else math.inf

            if m <= 8.0 * self.take_tol:
                # Probe a floor step ahead: either we escape a tie cluster at
                # the launch, or a collinear root is riding the curve (a
                # phantom challenger that never strictly wins) and the arc
                # must march on through the persistent tie.
                idx = int(np.searchsorted(hit_s_arr, s_cur, side="right"))
                s_hit = all_hits[idx][0] if idx < len(all_hits) else math.inf
                s_probe = min(s_cur + floor, s_apex, s_hit)
                if s_probe == s_hit:
                    _, ei, t_edge, psi_hit = all_hits[idx]
                    self._finish_boundary(curve, r1, r2, start_vid, samples,
                                          ei, t_edge, psi_hit, point_at(s_hit))
                    return
                if s_probe == s_apex:
                    apex = curve.point(0.0)
                    ei, t_edge = self._nearest_edge(apex)
                    self._finish_boundary(curve, r1, r2, start_vid, samples,
                                          ei, t_edge, 0.0, apex)
                    return
                x_probe = point_at(s_probe)
                if self.domain.contains(tuple(x_probe)) != "outside":
                    p_vals, p_vis, p_thr = self.root_values_pruned(x_probe, r1, r2)
                    p_pair = min(p_vals[r1], p_vals[r2])
                    p_other = p_vals.copy()
                    p_other[r1] = np.inf
                    p_other[r2] = np.inf
                    p_m = float(p_other.min()) - p_pair
                    if p_vis[r1] and p_vis[r2] and p_m > -8.0 * self.take_tol:
                        s_cur, x, vals, vis, thr = s_probe, x_probe, p_vals, p_vis, p_thr
                        samples.append(x.copy())
                        continue
                # A genuine takeover: collect the tie without further motion.
                ties = tuple(sorted({r1, r2, q} | {
                    int(i) for i in np.nonzero(vals <= pair_val + 8.0 * self.take_tol)[0]}))
                self._finish_interior(curve, r1, r2, start_vid, samples, sgn * s_cur,
                                      x.copy(), ties)
                return

            # Leg length: safe against every root but q, whose tie is solved
            # for exactly; the floor keeps degenerate near-ties moving.
            cap = 0.45 * m2 if math.isfinite(m2) else 4.0 * self.diag
            leg = max(min(cap, 4.0 * self.diag), floor)
            s_jump = s_cur + curve.dpsi(sgn * s_cur, leg)
            if curve.kind == "hyperbola":
                # Curve speed varies; keep the actual chord within the cap.
                for _ in range(4):
                    chord = math.dist(point_at(s_jump), x)
                    if chord <= max(1.1 * leg, floor):
                        break
                    s_jump = s_cur + 0.6 * (s_jump - s_cur)
            idx = int(np.searchsorted(hit_s_arr, s_cur, side="right"))
            s_hit = all_hits[idx][0] if idx < len(all_hits) else math.inf
            s_end = min(s_jump, s_hit, s_apex)

            boundary_leg = s_end == s_hit
            apex_leg = s_end == s_apex and not boundary_leg
            x_end = point_at(s_end)

            hit_tie = None
            if math.isfinite(m):
                g_end = self.value_of(q, x_end) - pair_formula(x_end)
                if g_end <= 0.0:
                    s_tie = float(brentq(
                        lambda s: self.value_of(q, point_at(s)) - pair_formula(point_at(s)),
                        s_cur, s_end, xtol=1e-13, maxiter=200))
                    hit_tie = s_tie

            if hit_tie is not None:
                x_tie = point_at(hit_tie)
                t_vals, t_vis, t_thr = self.root_values_pruned(x_tie, r1, r2)
                t_pair = min(t_vals[r1], t_vals[r2])
                others = t_vals.copy()
                others[r1] = np.inf
                others[r2] = np.inf
                best = float(others.min())
                if t_vis[r1] and t_vis[r2] and best >= t_pair - 8.0 * self.take_tol:
                    if best <= t_pair + 8.0 * self.take_tol:
                        ties = tuple(sorted({r1, r2} | {
                            int(i) for i in np.nonzero(others <= best + 8.0 * self.take_tol)[0]}))
                        self._finish_interior(curve, r1, r2, start_vid, samples,
                                              sgn * hit_tie, x_tie, ties)
                        return
                    # The formula tie was a ghost (q hidden there): march on.
                    s_cur, x, vals, vis, thr = hit_tie, x_tie, t_vals, t_vis, t_thr
                    samples.append(x.copy())
                    continue
                end = self._solve_takeover(curve, r1, r2, sgn, s_cur, hit_tie,
                                           int(np.argmin(others)))
                if end is not None:
                    self._finish_interior(curve, r1, r2, start_vid, samples, *end)
                return

            if boundary_leg:
                _, ei, t_edge, psi_hit = all_hits[idx]
                back = point_at(s_hit - min(1e-6 * self.diag,
                                            0.5 * (s_hit - s_cur)))
                m_b, q_b, vis_b = self._pair_margin(r1, r2, back)
                if vis_b and m_b >= -self.take_tol:
                    self._finish_boundary(curve, r1, r2, start_vid, samples,
                                          ei, t_edge, psi_hit, point_at(s_hit))
                    return
                end = self._solve_takeover(curve, r1, r2, sgn, s_cur, s_hit, q_b)
                if end is not None:
                    self._finish_interior(curve, r1, r2, start_vid, samples, *end)
                return
            if apex_leg:
                apex = curve.point(0.0)
                ei, t_edge = self._nearest_edge(apex)
                self._finish_boundary(curve, r1, r2, start_vid, samples, ei, t_edge,
                                      0.0, apex)
                return

            if self.domain.contains(tuple(x_end)) == "outside":
                # Missed crossing (numerical graze): bisect containment.
                lo, hi = s_cur, s_end
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    if self.domain.contains(tuple(point_at(mid))) == "outside":
                        hi = mid
                    else:
                        lo = mid
                x_hit = point_at(lo)
                ei, t_edge = self._nearest_edge(x_hit)
                self._finish_boundary(curve, r1, r2, start_vid, samples,
                                      ei, t_edge, sgn * lo, x_hit)
                return

            s_cur = s_end
            x = x_end
            vals, vis, thr = self.root_values_pruned(x, r1, r2)
            samples.append(x.copy())
        raise RuntimeError("arc tracing exceeded its leg budget")

    def _nearest_edge(self, xy: np.ndarray) -> tuple[int, float]:
        best = (0, 0.0, math.inf)
        for ei, (a, b, _, _) in enumerate(self._edges):
            dx, dy = b.x - a.x, b.y - a.y
            denom = dx * dx + dy * dy
            t = ((xy[0] - a.x) * dx + (xy[1] - a.y) * dy) / denom
            t = min(1.0, max(0.0, t))
            d = math.hypot(xy[0] - (a.x + t * dx), xy[1] - (a.y + t * dy))
            if d < best[2]:
                best = (ei, t, d)
        return best[0], best[1]

    def _solve_takeover(self, curve, r1: int, r2: int, sgn: float,
                        s_lo: float, s_hi: float, q: int):
        """Locate where root q (or a better one) ties the pair along the arc."""
        if q < 0:
            return None

        def gap(s: float, root: int) -> float:
            xy = curve.point(sgn * s)
            pair = min(self.value_of(r1, xy), self.value_of(r2, xy))
            return self.value_of(root, xy) - pair

        for _ in range(6):
            g_lo = gap(s_lo, q)
            g_hi = gap(s_hi, q)
            if g_lo > 0.0 and g_hi <= 0.0:
                s_star = float(brentq(lambda s: gap(s, q), s_lo, s_hi,
                                      xtol=1e-13, maxiter=200))
            else:
                # Raw values bracket nothing (a hidden root or a visibility
                # flip): find the visible-owner change by bisection.
                s_star = self._bisect_owner_change(curve, r1, r2, sgn, s_lo, s_hi)
                if s_star is None:
                    s_star = s_hi
            xy = curve.point(sgn * s_star)
            vals, vis = self.root_values(xy)
            best = float(vals.min())
            ties = [int(i) for i in np.nonzero(vals <= best + 8.0 * self.take_tol)[0]]
            others = [i for i in ties if i not in (r1, r2)]
            if others:
                return sgn * s_star, xy, tuple(sorted(set(ties) | {r1, r2}))
            # The supposed challenger is not actually tied here: a different
            # root must cross first; retry against the current best other.
            vals[r1] = np.inf
            vals[r2] = np.inf
            q2 = int(np.argmin(vals))
            if q2 == q or not np.isfinite(vals[q2]):
                return sgn * s_star, xy, tuple(sorted({r1, r2, q}))
            q = q2
            s_hi = s_star
        return sgn * s_star, xy, tuple(sorted({r1, r2, q}))

    def _pair_optimal(self, r1: int, r2: int, xy: np.ndarray) -> bool:
        """Sign-only optimality test with raw-value candidate pruning."""
        raw = self.w + np.hypot(self.root_pos[:, 0] - xy[0], self.root_pos[:, 1] - xy[1])
        pair_raw = min(raw[r1], raw[r2])
        loose = raw - pair_raw <= 8.0 * self.take_tol
        loose[r1] = loose[r2] = True
        active_mask = np.zeros(self.n + 1, dtype=bool)
        active_mask[self.active_arr] = True
        cand = np.nonzero(loose & active_mask)[0]
        pts = self.root_pos[cand]
        starts = np.repeat(xy[None, :], len(pts), axis=0)
        vis = segments_visible(self.domain, starts, pts)
        vals = np.where(vis, raw[cand], np.inf)
        i1 = int(np.nonzero(cand == r1)[0][0])
        i2 = int(np.nonzero(cand == r2)[0][0])
        if not (vis[i1] and vis[i2]):
            return False
        pair_val = min(vals[i1], vals[i2])
        vals[i1] = np.inf
        vals[i2] = np.inf
        best = vals.min() if len(vals) else np.inf
        return bool(best - pair_val >= -self.take_tol)

    def _bisect_owner_change(self, curve, r1: int, r2: int, sgn: float,
                             s_lo: float, s_hi: float) -> float | None:
        if self._pair_optimal(r1, r2, curve.point(sgn * s_hi)):
            return None
        lo, hi = s_lo, s_hi
        for _ in range(48):
            mid = 0.5 * (lo + hi)
            if self._pair_optimal(r1, r2, curve.point(sgn * mid)):
                lo = mid
            else:
                hi = mid
        return hi

    def _finish_interior(self, curve, r1: int, r2: int, start_vid: int,
                         samples: list[np.ndarray], psi_end: float, xy: np.ndarray,
                         ties: tuple[int, ...]) -> None:
        val = min(self.value_of(r1, xy), self.value_of(r2, xy))
        vid = self.registry.add(xy, kind="interior", distance=val, roots=ties,
                                snap_radius=3e-4 * self.diag)
        self._emit_arc(curve, r1, r2, start_vid, vid, samples, xy)
        for a in ties:
            for b in ties:
                if a < b and {a, b} != {r1, r2}:
                    tangent = curve.tangent(psi_end)
                    self._enqueue(a, b, xy.copy(), vid,
                                  np.array([-tangent[1], tangent[0]]))

    def _finish_boundary(self, curve, r1: int, r2: int, start_vid: int,
                         samples: list[np.ndarray], ei: int, t_edge: float,
                         psi_end: float, xy: np.ndarray) -> None:
        val = min(self.value_of(r1, xy), self.value_of(r2, xy))
        vid = self.registry.add(xy, kind="boundary", distance=val, roots=(r1, r2))
        known = any(bp.vertex == vid for bp in self.breakpoints[ei])
        if not known and self.registry.vertices[vid].kind != "corner":
            self.breakpoints[ei].append(_Breakpoint(edge=ei, t=t_edge,
                                                    pair=(min(r1, r2), max(r1, r2)),
                                                    vertex=vid))
        self._emit_arc(curve, r1, r2, start_vid, vid, samples, xy)

    def _emit_arc(self, curve, r1: int, r2: int, v_start: int, v_end: int,
                  samples: list[np.ndarray], end_xy: np.ndarray) -> None:
        key = frozenset((r1, r2))
        duplicate = (key, v_end) in self._arc_emitted
        self._arc_seen.add((key, v_end))
        self._arc_emitted.add((key, v_start))
        self._arc_emitted.add((key, v_end))
        if duplicate:
            return               # the same arc was already traced from the far end
        start_xy = samples[0]
        if v_start == v_end:
            length = math.dist(start_xy, end_xy) + sum(
                math.dist(samples[i], samples[i + 1]) for i in range(len(samples) - 1))
            if length < 4.0 * self.registry.radius:
                return           # degenerate loop inside one merged vertex
        psi_a = curve.param_of(start_xy)
        psi_b = curve.param_of(end_xy)
        approx_len = sum(math.dist(samples[i], samples[i + 1]) for i in range(len(samples) - 1))
        count = int(np.clip(math.ceil(approx_len / (self.diag / 160.0)), 8, 48))
        psis = np.linspace(psi_a, psi_b, count + 1)
        poly = np.array([curve.point(p) for p in psis])
        poly[0] = start_xy
        poly[-1] = end_xy
        lo, hi = (r1, r2) if r1 < r2 else (r2, r1)
        self.arcs.append(BisectorArc(
            roots=(lo, hi), kind=curve.kind,
            start_vertex=v_start, end_vertex=v_end, polyline=poly,
            foci=(Point(*self.root_pos[lo]), Point(*self.root_pos[hi])),
            delta=float(self.w[hi] - self.w[lo])))

    # -- assembly --------------------------------------------------------

    def boundary_chain(self) -> list[BoundaryPiece]:
        pieces: list[BoundaryPiece] = []
        probes: list[np.ndarray] = []
        spans: list[tuple[int, int, int]] = []
        for ei, (a, b, _, _) in enumerate(self._edges):
            va = self.registry.find(np.array([a.x, a.y]))
            vb = self.registry.find(np.array([b.x, b.y]))
            assert va is not None and vb is not None
            bps = sorted({(bp.t, bp.vertex) for bp in self.breakpoints.get(ei, [])})
            chain = [(0.0, va)] + [bp for bp in bps if 1e-12 < bp[0] < 1.0 - 1e-12] + [(1.0, vb)]
            for (t0, v0), (t1, v1) in zip(chain, chain[1:]):
                if v0 == v1:
                    continue
                spans.append((ei, v0, v1))
                probes.append(self._edge_point_nudged(ei, 0.5 * (t0 + t1)))
        if spans:
            owners = self.owners_batch(np.array(probes))
            for (ei, v0, v1), owner in zip(spans, owners):
                pieces.append(BoundaryPiece(edge=ei, start_vertex=v0,
                                            end_vertex=v1, owner=int(owner)))
        return pieces

    def build_cells(self, pieces: list[BoundaryPiece]) -> list[SpmCell]:
        directed: list[tuple[int, int, int, np.ndarray]] = []
        for piece in pieces:
            pa = self.registry.positions[piece.start_vertex]
            pb = self.registry.positions[piece.end_vertex]
            directed.append((piece.start_vertex, piece.end_vertex, piece.owner,
                             np.vstack([pa, pb])))
        for arc in self.arcs:
            poly = arc.polyline
            k = len(poly) // 2
            tangent = poly[min(k + 1, len(poly) - 1)] - poly[max(k - 1, 0)]
            tn = math.hypot(*tangent)
            if tn <= 0:
                continue
            left_n = np.array([-tangent[1], tangent[0]]) / tn
            r1, r2 = arc.roots
            # Window rays have equal raw values on both sides, so the side
            # question needs the visibility-aware referee.
            left_owner = None
            for eps in (1e-6 * self.diag, 1e-7 * self.diag, 1e-5 * self.diag):
                probe = poly[k] + eps * left_n
                if self.domain.contains(tuple(probe)) == "outside":
                    continue
                o, _ = self.owner_at(probe)
                if o in (r1, r2):
                    left_owner = o
                    break
            if left_owner is None:
                probe = poly[k] + 1e-6 * self.diag * left_n
                left_owner = r1 if self.value_of(r1, probe) <= self.value_of(r2, probe) else r2
            right_owner = r2 if left_owner == r1 else r1
            directed.append((arc.start_vertex, arc.end_vertex, left_owner, poly))
            directed.append((arc.end_vertex, arc.start_vertex, right_owner, poly[::-1]))

        by_root: dict[int, list[int]] = defaultdict(list)
        for i, rec in enumerate(directed):
            by_root[rec[2]].append(i)

        cells: list[SpmCell] = []
        for root, idxs in sorted(by_root.items()):
            unused = set(idxs)
            starts: dict[int, list[int]] = defaultdict(list)
            for i in idxs:
                starts[directed[i][0]].append(i)
            while unused:
                first = min(unused)
                loop_edges = [first]
                unused.discard(first)
                cur = first
                ok = True
                for _ in range(len(idxs) + 1):
                    end_v = directed[cur][1]
                    if end_v == directed[first][0]:
                        break
                    options = [i for i in starts[end_v] if i in unused]
                    if not options:
                        ok = False
                        break
                    if len(options) == 1:
                        nxt = options[0]
                    else:
                        d_in = directed[cur][3][-1] - directed[cur][3][-2]
                        rev = -d_in

                        def ccw_from_rev(i: int) -> float:
                            d_out = directed[i][3][1] - directed[i][3][0]
                            ang = math.atan2(rev[0] * d_out[1] - rev[1] * d_out[0],
                                             rev[0] * d_out[0] + rev[1] * d_out[1])
                            return ang if ang > 1e-12 else ang + 2.0 * math.pi

                        nxt = max(options, key=ccw_from_rev)
                    loop_edges.append(nxt)
                    unused.discard(nxt)
                    cur = nxt
                else:
                    ok = False
                if not ok:
                    continue
                pts = np.vstack([directed[i][3][:-1] for i in loop_edges])
                area = 0.5 * float(np.sum(pts[:, 0] * np.roll(pts[:, 1], -1)
                                          - np.roll(pts[:, 0], -1) * pts[:, 1]))
                if area > (10.0 * self.tau) ** 2:
                    cells.append(SpmCell(root=root, loop=pts, area=area))
        return cells

    def finalize_vertex_roots(self) -> None:
        """Recompute realizing roots per vertex from the distance field."""
        if not self.registry.vertices:
            return
        probes = []
        for vid, v in enumerate(self.registry.vertices):
            xy = self.registry.positions[vid]
            probes.append(self._inward_probe(xy, v))
        probes = np.array(probes)
        pts = self.root_pos[self.active_arr]
        m = len(probes)
        starts = np.repeat(probes, len(pts), axis=0)
        ends = np.tile(pts, (m, 1))
        vis = segments_visible(self.domain, starts, ends).reshape(m, len(pts))
        for vid, v in enumerate(self.registry.vertices):
            xy = self.registry.positions[vid]
            dist = np.hypot(pts[:, 0] - xy[0], pts[:, 1] - xy[1])
            vals = self.w[self.active_arr] + dist
            vmask = vis[vid]
            if not vmask.any():
                continue
            best = float(vals[vmask].min())
            tol = max(self.tau, 1e-9 * (1.0 + best))
            realized = set(int(self.active_arr[i]) for i in range(len(pts))
                           if vmask[i] and vals[i] <= best + tol)
            v.roots = tuple(sorted(set(v.roots) | realized))
            v.distance = best

    def _inward_probe(self, xy: np.ndarray, v: SpmVertex) -> np.ndarray:
        eta = 1e-7 * self.diag
        if v.kind == "interior":
            return xy
        if v.kind == "corner" and v.corner is not None:
            # Nudge along the inward angle direction at the corner.
            flat = 0
            for ring in self.domain.rings():
                if v.corner < flat + len(ring):
                    vi = v.corner - flat
                    m = len(ring)
                    prev = np.array(ring[(vi - 1) % m])
                    nxt = np.array(ring[(vi + 1) % m])
                    cur = np.array(ring[vi])
                    d1 = prev - cur
                    d2 = nxt - cur
                    d1 /= max(np.hypot(*d1), 1e-300)
                    d2 /= max(np.hypot(*d2), 1e-300)
                    bis = d1 + d2
                    nb = np.hypot(*bis)
                    if nb < 1e-9:
                        bis = np.array([-d2[1], d2[0]])
                        nb = 1.0
                    probe = cur + eta * bis / nb
                    if self.domain.contains(tuple(probe)) != "outside":
                        return probe
                    return cur - eta * bis / nb
                flat += len(ring)
        # Boundary vertex: nudge along the host edge's inward normal.
        best_ei, _ = self._nearest_edge(xy)
        a, b, _, _ = self._edges[best_ei]
        dx, dy = b.x - a.x, b.y - a.y
        ln = math.hypot(dx, dy)
        return xy + eta * np.array([-dy / ln, dx / ln])


def _is_convex(domain: PolygonalDomain) -> bool:
    if "convex" not in domain._cache:
        ok = domain.h == 0
        if ok:
            ring = domain.outer
            m = len(ring)
            ok = all(orient(ring[i - 1], ring[i], ring[(i + 1) % m]) > 0
                     for i in range(m))
        domain._cache["convex"] = ok
    return domain._cache["convex"]  # type: ignore[return-value]


def _convex_spm(domain: PolygonalDomain, source: Point, cells: bool) -> ShortestPathMap:
    """In a convex domain every point sees the source: one cell, no arcs."""
    corners = domain.corner_array()
    n = len(corners)
    w = np.append(np.hypot(corners[:, 0] - source.x, corners[:, 1] - source.y), 0.0)
    roots = [SpmRoot(index=i, position=Point(*corners[i]), weight=float(w[i]),
                     is_source=False) for i in range(n)]
    roots.append(SpmRoot(index=n, position=source, weight=0.0, is_source=True))
    vertices = [SpmVertex(position=Point(*corners[v]), kind="corner",
                          distance=float(w[v]), roots=(v, n), corner=v)
                for v in range(n)]
    pieces = [BoundaryPiece(edge=ei, start_vertex=ei, end_vertex=(ei + 1) % n,
                            owner=n) for ei in range(n)]
    spm = ShortestPathMap(domain=domain, source=source, roots=roots, weights=w,
                          vertices=vertices, arcs=[], boundary_pieces=pieces,
                          source_root=n)
    if cells:
        loop = corners.copy()
        spm.cells = [SpmCell(root=n, loop=loop, area=float(domain.area()))]
    return spm


def build_spm(domain: PolygonalDomain, source: PointLike, cells: bool = True) -> ShortestPathMap:
    """Construct the shortest path map of one source point.

    With cells=False the cell loops are skipped (vertices, arcs and boundary
    pieces are still produced); farthest-neighbor queries use that mode.
    """
    source = as_point(source)
    if domain.contains(source) == "outside":
        raise ValueError(f"source outside domain: {source}")
    if _is_convex(domain):
        return _convex_spm(domain, source, cells)
    builder = _SpmBuilder(domain, source)
    builder.seed_corners()
    builder.seed_windows()
    builder.scan_boundary()
    builder.trace_all()
    pieces = builder.boundary_chain() if cells else []
    roots = [SpmRoot(index=i, position=Point(*builder.root_pos[i]),
                     weight=float(builder.w[i]), is_source=(i == builder.SRC))
             for i in range(builder.n + 1)]
    spm = ShortestPathMap(
        domain=domain, source=source, roots=roots, weights=builder.w,
        vertices=builder.registry.vertices, arcs=builder.arcs,
        boundary_pieces=pieces,
        source_root=builder.SRC if builder.source_alias is None else builder.source_alias)
    if cells:
        builder.finalize_vertex_roots()
        spm.cells = builder.build_cells(pieces)
    return spm


def locate(spm: ShortestPathMap, x: PointLike) -> int:
    """Root index whose cell contains x (any minimizing root on borders)."""
    x = as_point(x)
    domain = spm.domain
    if domain.contains(x) == "outside":
        raise ValueError(f"point outside domain: {x}")
    positions = np.array([[r.position.x, r.position.y] for r in spm.roots])
    starts = np.repeat([[x.x, x.y]], len(positions), axis=0)
    vis = segments_visible(domain, starts, positions)
    if spm.source_root < len(spm.roots) - 1:
        vis[-1] = False              # aliased source: keep the corner label
    dist = np.hypot(positions[:, 0] - x.x, positions[:, 1] - x.y)
    vals = np.where(vis, spm.weights + dist, np.inf)
    return int(np.argmin(vals))


def farthest_neighbors(domain: PolygonalDomain, p: PointLike) -> tuple[float, list[SpmVertex]]:
    """Maximum geodesic distance from p and the map vertices attaining it."""
    p = as_point(p)
    spm = build_spm(domain, p, cells=False)
    best = max(v.distance for v in spm.vertices)
    tol = max(domain.tol.tau_abs, 1e-12 * (1.0 + best))
    witnesses = [v for v in spm.vertices if v.distance >= best - tol]
    return best, witnesses


def phi(domain: PolygonalDomain, p: PointLike) -> float:
    """Geodesic eccentricity: the distance to a farthest point of the domain."""
    value, _ = farthest_neighbors(domain, p)
    return value
