"""Independent brute-force validators and seeded random fixtures.

The dense-graph oracle runs Dijkstra over an explicit graph of straight
feasible connections (corners, grid samples, query points) and never touches
the shortest-path-map machinery, so the two sides can arbitrate each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _sparse_dijkstra

from .domain import PolygonalDomain, validate
from .geodesic import distances_from_point
from .primitives import Point, PointLike, as_point
from .visibility import segments_visible, visibility_graph


@dataclass(frozen=True)
class DenseGraph:
    """Straight-connection graph on corners plus a k x k grid inside the domain.

    Grid nodes connect to every corner they see and to nearby grid nodes; the
    graph is a subgraph of all feasible straight connections, so its path
    lengths upper-bound geodesic distances and shrink as k grows.
    """

    k: int
    nodes: np.ndarray          # (N, 2); corners first
    n_corners: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.nodes)


def _grid_points(domain: PolygonalDomain, k: int) -> np.ndarray:
    x0, y0, x1, y1 = domain.bbox
    xs = x0 + (x1 - x0) * np.arange(k + 1) / k
    ys = y0 + (y1 - y0) * np.arange(k + 1) / k
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    keep = domain.interior_mask(pts, margin=1e-9 * domain.bbox_diag)
    return pts[keep]


def dense_graph(domain: PolygonalDomain, k: int) -> DenseGraph:
    """Build (and cache) the k-resolution dense oracle graph."""
    if k < 2:
        raise ValueError("k must be at least 2")
    cache = domain._cache
    key = ("dense_graph", k)
    if key in cache:
        return cache[key]  # type: ignore[return-value]
    corners = domain.corner_array()
    n = len(corners)
    grid = _grid_points(domain, k)
    nodes = np.vstack([corners, grid]) if len(grid) else corners.copy()

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    wts: list[np.ndarray] = []

    graph = visibility_graph(domain)
    ci, cj = np.nonzero(np.triu(graph.adjacency, 1))
    rows.append(ci)
    cols.append(cj)
    wts.append(graph.weights[ci, cj])

    m = len(grid)
    if m:
        # Corner-to-grid edges: full visibility tests.
        starts = np.repeat(grid, n, axis=0)
        ends = np.tile(corners, (m, 1))
        vis = segments_visible(domain, starts, ends).reshape(m, n)
        gi, gc = np.nonzero(vis)
        rows.append(gi + n)
        cols.append(gc)
        d = np.hypot(grid[gi, 0] - corners[gc, 0], grid[gi, 1] - corners[gc, 1])
        wts.append(d)

        # Grid-to-grid edges within a two-cell neighborhood.
        x0, y0, x1, y1 = domain.bbox
        step_x = (x1 - x0) / k if x1 > x0 else 1.0
        step_y = (y1 - y0) / k if y1 > y0 else 1.0
        ix = np.rint((grid[:, 0] - x0) / step_x).astype(int)
        iy = np.rint((grid[:, 1] - y0) / step_y).astype(int)
        index = {}
        for a, (i, j) in enumerate(zip(ix, iy)):
            index[(i, j)] = a
        # Half of the 5x5 neighborhood, so each pair is built once.
        offsets = [(0, 1), (0, 2)] + [(di, dj) for di in (1, 2) for dj in range(-2, 3)]
        pa, pb = [], []
        for di, dj in offsets:
            for a, (i, j) in enumerate(zip(ix, iy)):
                b = index.get((i + di, j + dj))
                if b is not None:
                    pa.append(a)
                    pb.append(b)
        if pa:
            pa = np.array(pa)
            pb = np.array(pb)
            vis = segments_visible(domain, grid[pa], grid[pb])
            pa, pb = pa[vis], pb[vis]
            rows.append(pa + n)
            cols.append(pb + n)
            wts.append(np.hypot(grid[pa, 0] - grid[pb, 0], grid[pa, 1] - grid[pb, 1]))

    out = DenseGraph(k=k, nodes=nodes, n_corners=n,
                     rows=np.concatenate(rows).astype(np.int32),
                     cols=np.concatenate(cols).astype(np.int32),
                     weights=np.concatenate(wts))
    cache[key] = out
    return out


def dense_distance(domain: PolygonalDomain, s: PointLike, t: PointLike, k: int) -> float:
    """Oracle distance: Dijkstra over the dense graph with s and t attached."""
    s = as_point(s)
    t = as_point(t)
    for p in (s, t):
        if domain.contains(p) == "outside":
            raise ValueError(f"point outside domain: {p}")
    g = dense_graph(domain, k)
    N = g.node_count
    s_arr = np.array([[s.x, s.y]])
    t_arr = np.array([[t.x, t.y]])
    vis_s = segments_visible(domain, np.repeat(s_arr, N, axis=0), g.nodes)
    vis_t = segments_visible(domain, np.repeat(t_arr, N, axis=0), g.nodes)

    rows = [g.rows, g.cols]
    cols = [g.cols, g.rows]
    wts = [g.weights, g.weights]
    si = np.nonzero(vis_s)[0]
    rows.append(np.full(len(si), N))
    cols.append(si)
    wts.append(np.hypot(g.nodes[si, 0] - s.x, g.nodes[si, 1] - s.y))
    ti = np.nonzero(vis_t)[0]
    rows.append(ti)
    cols.append(np.full(len(ti), N + 1))
    wts.append(np.hypot(g.nodes[ti, 0] - t.x, g.nodes[ti, 1] - t.y))
    if segments_visible(domain, s_arr, t_arr)[0]:
        rows.append(np.array([N]))
        cols.append(np.array([N + 1]))
        wts.append(np.array([math.dist(s, t)]))

    matrix = coo_matrix((np.concatenate(wts),
                         (np.concatenate(rows), np.concatenate(cols))),
                        shape=(N + 2, N + 2)).tocsr()
    dist = _sparse_dijkstra(matrix, directed=False, indices=N)
    return float(dist[N + 1])


def brute_phi(domain: PolygonalDomain, p: PointLike, k: int) -> tuple[float, Point]:
    """Sampled farthest distance from p: a lower bound that tightens with k."""
    p = as_point(p)
    samples = np.vstack([_grid_points(domain, k), domain.corner_array()])
    d = distances_from_point(domain, p, samples)
    i = int(np.argmax(d))
    return float(d[i]), Point(*samples[i])


@dataclass
class Lemma1Trial:
    point: Point
    brute: float
    phi: float
    argmax: Point
    vertex_gap: float        # distance from brute argmax to nearest map vertex
    ok: bool
    reason: str = ""


@dataclass
class Lemma1Report:
    k: int
    spacing: float
    distance_bound: float
    trials: list[Lemma1Trial] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.trials)

    @property
    def passes(self) -> int:
        return sum(t.ok for t in self.trials)


def check_lemma1(domain: PolygonalDomain, trials: int, k: int,
                 seed: int = 0) -> Lemma1Report:
    """Cross-check the farthest-neighbor machinery against brute sampling.

    For random interior points the sampled farthest distance must stay within
    the oracle bound of the map-based value, and the sampled argmax must land
    near some vertex of the map built at that point.
    """
    from .spm import build_spm

    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = domain.bbox
    spacing = math.hypot((x1 - x0) / k, (y1 - y0) / k)
    bound = 4.0 * domain.bbox_diag / k
    report = Lemma1Report(k=k, spacing=spacing, distance_bound=bound)
    for _ in range(trials):
        p = random_point(domain, rng)
        bval, bargmax = brute_phi(domain, p, k)
        spm = build_spm(domain, p, cells=False)
        phi_val = max(v.distance for v in spm.vertices)
        verts = np.array([[v.position.x, v.position.y] for v in spm.vertices])
        gap = float(np.min(np.hypot(verts[:, 0] - bargmax.x, verts[:, 1] - bargmax.y)))
        reasons = []
        if bval > phi_val + max(domain.tol.tau_abs, 1e-9 * phi_val):
            reasons.append(f"brute {bval:.12g} exceeds phi {phi_val:.12g}")
        if phi_val - bval > bound:
            reasons.append(f"phi-brute gap {phi_val - bval:.3g} exceeds bound {bound:.3g}")
        if gap > 2.0 * spacing:
            reasons.append(f"argmax {gap:.3g} from nearest vertex (limit {2 * spacing:.3g})")
        report.trials.append(Lemma1Trial(
            point=p, brute=bval, phi=phi_val, argmax=bargmax,
            vertex_gap=gap, ok=not reasons, reason="; ".join(reasons)))
    return report


# -- seeded random fixtures ---------------------------------------------------


def random_point(domain: PolygonalDomain, rng: np.random.Generator) -> Point:
    """Uniform rejection sample from the domain interior."""
    x0, y0, x1, y1 = domain.bbox
    for _ in range(20000):
        p = Point(float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
        if domain.contains(p) == "interior":
            return p
    raise RuntimeError("rejection sampling failed; domain area too small?")


def _convex_blob(rng: np.random.Generator, center: np.ndarray, radius: float,
                 count: int, wobble: float) -> list[tuple[float, float]]:
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, count))
    # Enforce angular separation so edges stay well conditioned.
    for _ in range(40):
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
        if gaps.min() > 0.25 * 2 * math.pi / count:
            break
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, count))
    r = radius * rng.uniform(1.0 - wobble, 1.0 + wobble, count)
    return [(float(center[0] + rr * math.cos(a)), float(center[1] + rr * math.sin(a)))
            for a, rr in zip(angles, r)]


def random_domain(seed: int, holes: int | None = None,
                  outer_corners: int | None = None) -> PolygonalDomain:
    """Seeded random domain: a wobbly star-shaped outer ring with up to three
    shrunken convex holes, rejection-tested until validation passes."""
    rng = np.random.default_rng(seed)
    R = 10.0
    clearance = 0.8
    for _ in range(220):
        m = outer_corners or int(rng.integers(8, 15))
        outer = _convex_blob(rng, np.zeros(2), R, m, wobble=0.25)
        h = holes if holes is not None else int(rng.integers(1, 4))
        hole_rings: list[list[tuple[float, float]]] = []
        tries = 0
        while len(hole_rings) < h and tries < 120:
            tries += 1
            c = rng.uniform(-0.55 * R, 0.55 * R, 2)
            rho = rng.uniform(0.10 * R, 0.20 * R)
            ring = _convex_blob(rng, c, rho, int(rng.integers(4, 8)), wobble=0.2)
            candidate = hole_rings + [ring]
            domain, rep = validate(outer, candidate)
            if domain is None:
                continue
            if _min_feature_clearance(domain) < clearance:
                continue
            hole_rings = candidate
        domain, rep = validate(outer, hole_rings)
        if domain is not None and len(hole_rings) == h \
                and _min_feature_clearance(domain) >= clearance:
            return domain
    raise RuntimeError(f"random_domain failed to converge for seed {seed}")


def _min_feature_clearance(domain: PolygonalDomain) -> float:
    """Smallest gap between distinct boundary rings."""
    from .primitives import point_segment_distance

    rings = domain.rings()
    best = math.inf
    for i in range(len(rings)):
        for j in range(len(rings)):
            if i == j:
                continue
            for p in rings[i]:
                m = len(rings[j])
                for e in range(m):
                    best = min(best, point_segment_distance(
                        p, rings[j][e], rings[j][(e + 1) % m]))
    return best
