"""Visibility tests and the corner visibility graph.

A pair of points is mutually visible when the closed segment between them
stays inside the closed domain.  Grazing contact with the boundary (touching
corners or running along edges without crossing into a hole or the exterior)
counts as visible.

The batched kernel classifies segments against all boundary edges with
vectorized orientation tests and falls back to an exact contact-subdivision
routine for near-degenerate cases, so grazing semantics never depend on
floating-point luck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import PolygonalDomain
from .primitives import PointLike, as_point, segment_intersection


def _domain_scale_sq(domain: PolygonalDomain) -> float:
    x0, y0, x1, y1 = domain.bbox
    s = domain.bbox_diag + max(abs(x0), abs(y0), abs(x1), abs(y1))
    return s * s


def _visible_exact(domain: PolygonalDomain, a, b) -> bool:
    """Contact-subdivision test: split ab at every boundary contact and check
    that each open piece stays inside the closed domain."""
    a = as_point(a)
    b = as_point(b)
    if a == b:
        return domain.contains(a) != "outside"
    tau = domain.tol.tau_abs
    ts: set[float] = {0.0, 1.0}
    abx, aby = b.x - a.x, b.y - a.y
    len2 = abx * abx + aby * aby

    def param(p) -> float:
        return ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2

    for e1, e2, _, _ in domain.edges():
        res = segment_intersection(a, b, e1, e2)
        if res.kind == "proper":
            # A crossing within tau of any endpoint is a graze, not a block;
            # the contact-subdivision midpoints settle which side is inside.
            w = res.points[0]
            if all(math.dist(w, q) > tau for q in (e1, e2, a, b)):
                return False
            ts.add(min(1.0, max(0.0, param(w))))
        elif res.kind in ("touch", "overlap"):
            for p in res.points:
                ts.add(min(1.0, max(0.0, param(p))))
    order = sorted(ts)
    seg_len = math.sqrt(len2)
    for t0, t1 in zip(order, order[1:]):
        if (t1 - t0) * seg_len <= 2.0 * domain.tol.tau_abs:
            continue
        tm = 0.5 * (t0 + t1)
        mid = (a.x + tm * abx, a.y + tm * aby)
        if domain.contains(mid) == "outside":
            return False
    return True


def visible(domain: PolygonalDomain, a: PointLike, b: PointLike) -> bool:
    """Exact mutual-visibility test for two points of the domain.

    Raises ValueError when either endpoint lies outside the closed domain.
    """
    a = as_point(a)
    b = as_point(b)
    if domain.contains(a) == "outside":
        raise ValueError(f"point outside domain: {a}")
    if domain.contains(b) == "outside":
        raise ValueError(f"point outside domain: {b}")
    return _visible_exact(domain, a, b)


def _visible_contact_subdivision(domain: PolygonalDomain, a: np.ndarray, b: np.ndarray) -> bool:
    """Vectorized version of the contact-subdivision test for one segment.

    Collects every parameter where the segment meets the boundary within tau
    (transversal crossings, endpoint grazes, collinear overlaps all alike)
    and accepts the segment iff each open piece stays inside the closed
    domain.  Used as the fast fallback for ambiguous kernel rows.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    tau = domain.tol.tau_abs
    r = b - a
    L2 = float(r @ r)
    L = math.sqrt(L2)
    if L <= 3e-9 * domain.bbox_diag:
        return domain.contains(tuple(a)) != "outside"
    e1, e2 = _edge_arrays(domain)
    s = e2 - e1
    qp = e1 - a

    den = r[0] * s[:, 1] - r[1] * s[:, 0]
    t_num = qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]
    u_num = qp[:, 0] * r[1] - qp[:, 1] * r[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t_num / den
        u = -u_num / den
    e_len = np.hypot(s[:, 0], s[:, 1])
    pad_t = tau / L
    pad_u = tau / np.maximum(e_len, 1e-300)
    nonpar = np.abs(den) > 1e-14 * (L * e_len)
    hit = nonpar & (t >= -pad_t) & (t <= 1.0 + pad_t) & (u >= -pad_u) & (u <= 1.0 + pad_u)
    params = list(np.clip(t[hit], 0.0, 1.0))

    # Edge endpoints within tau of the segment (covers collinear overlaps).
    for pts in (e1, e2):
        rel = pts - a
        proj = np.clip((rel @ r) / L2, 0.0, 1.0)
        closest = a + proj[:, None] * r
        near = np.hypot(pts[:, 0] - closest[:, 0], pts[:, 1] - closest[:, 1]) <= tau
        params.extend(proj[near])

    params = sorted(set([0.0, 1.0] + [float(v) for v in params]))
    mids = []
    for t0, t1 in zip(params, params[1:]):
        if (t1 - t0) * L > 2.0 * tau:
            mids.append(a + (0.5 * (t0 + t1)) * r)
    if not mids:
        return True
    return bool(domain.contains_mask(np.array(mids)).all())


def _edge_arrays(domain: PolygonalDomain) -> tuple[np.ndarray, np.ndarray]:
    cache = domain._cache
    if "edge_arrays" not in cache:
        e1 = np.array([[e[0].x, e[0].y] for e in domain.edges()], dtype=float)
        e2 = np.array([[e[1].x, e[1].y] for e in domain.edges()], dtype=float)
        cache["edge_arrays"] = (e1, e2)
    return cache["edge_arrays"]  # type: ignore[return-value]


def segments_visible(domain: PolygonalDomain, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Visibility of many segments at once.

    starts/ends are (m, 2) arrays whose rows pair up into segments assumed to
    have both endpoints in the closed domain.  Returns a boolean (m,) array.
    """
    starts = np.asarray(starts, dtype=float)
    ends = np.asarray(ends, dtype=float)
    m = len(starts)
    if m == 0:
        return np.zeros(0, dtype=bool)
    e1, e2 = _edge_arrays(domain)
    eta = 1e-9 * domain.bbox_diag
    margin = 1e-12 * _domain_scale_sq(domain)

    # Edges far outside the batch bounding box cannot block anything.
    if len(e1) > 24:
        pad = 4.0 * eta
        lo = np.minimum(starts.min(axis=0), ends.min(axis=0)) - pad
        hi = np.maximum(starts.max(axis=0), ends.max(axis=0)) + pad
        ebox_lo = np.minimum(e1, e2)
        ebox_hi = np.maximum(e1, e2)
        keep = ((ebox_lo <= hi) & (ebox_hi >= lo)).all(axis=1)
        if keep.sum() < 0.7 * len(e1):
            e1 = e1[keep]
            e2 = e2[keep]

    seg = ends - starts
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    tiny = seg_len <= 3.0 * eta
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = np.where(seg_len[:, None] > 0, seg / np.maximum(seg_len, 1e-300)[:, None], 0.0)
    a = starts + eta * unit
    b = ends - eta * unit

    visible_mask = np.ones(m, dtype=bool)
    ambiguous = np.zeros(m, dtype=bool)

    # Chunk over segments to bound the (rows, edges) temporaries.
    chunk = max(1, int(4_000_000 // max(len(e1), 1)))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        av = a[lo:hi]
        bv = b[lo:hi]
        r = (bv - av)[:, None, :]                 # (c, 1, 2)
        to_e1 = e1[None, :, :] - av[:, None, :]   # (c, E, 2)
        to_e2 = e2[None, :, :] - av[:, None, :]
        d1 = r[..., 0] * to_e1[..., 1] - r[..., 1] * to_e1[..., 0]
        d2 = r[..., 0] * to_e2[..., 1] - r[..., 1] * to_e2[..., 0]
        s = (e2 - e1)[None, :, :]                 # (1, E, 2)
        fr_a = av[:, None, :] - e1[None, :, :]
        fr_b = bv[:, None, :] - e1[None, :, :]
        d3 = s[..., 0] * fr_a[..., 1] - s[..., 1] * fr_a[..., 0]
        d4 = s[..., 0] * fr_b[..., 1] - s[..., 1] * fr_b[..., 0]

        straddle_ab = ((d1 > margin) & (d2 < -margin)) | ((d1 < -margin) & (d2 > margin))
        straddle_e = ((d3 > margin) & (d4 < -margin)) | ((d3 < -margin) & (d4 > margin))
        crossing = straddle_ab & straddle_e
        blocked = crossing.any(axis=1)

        # A vanishing orientation is only a real contact when the collinear
        # point projects into the other segment's span (endpoint touches at
        # the shrunk-off ends are expected and harmless).  The projections
        # are computed sparsely: candidates are rare.
        amb = np.zeros(hi - lo, dtype=bool)
        cand_i, cand_j = np.nonzero(
            ((np.abs(d1) <= margin) | (np.abs(d2) <= margin)
             | (np.abs(d3) <= margin) | (np.abs(d4) <= margin)) & ~crossing)
        if len(cand_i):
            rr = bv[cand_i] - av[cand_i]
            r_len2 = np.maximum((rr * rr).sum(axis=1), 1e-300)
            ee1 = e1[cand_j]
            ee2 = e2[cand_j]
            ss = ee2 - ee1
            s_len2 = np.maximum((ss * ss).sum(axis=1), 1e-300)

            def in_span(p_: np.ndarray, base: np.ndarray, d_: np.ndarray,
                        l2: np.ndarray) -> np.ndarray:
                tt = ((p_ - base) * d_).sum(axis=1) / l2
                return (tt > 0.0) & (tt < 1.0)

            near = (np.abs(d1[cand_i, cand_j]) <= margin) & in_span(ee1, av[cand_i], rr, r_len2)
            near |= (np.abs(d2[cand_i, cand_j]) <= margin) & in_span(ee2, av[cand_i], rr, r_len2)
            near |= (np.abs(d3[cand_i, cand_j]) <= margin) & in_span(av[cand_i], ee1, ss, s_len2)
            near |= (np.abs(d4[cand_i, cand_j]) <= margin) & in_span(bv[cand_i], ee1, ss, s_len2)
            np.logical_or.at(amb, cand_i[near], True)

        visible_mask[lo:hi] &= ~blocked
        ambiguous[lo:hi] = amb & ~blocked

    mids = 0.5 * (starts + ends)
    inside = domain.contains_mask(mids)
    visible_mask &= inside | tiny

    rows = np.nonzero(ambiguous & visible_mask)[0]
    if len(rows):
        visible_mask[rows] = _ambiguous_rows_visible(domain, starts[rows], ends[rows])
    visible_mask[tiny] = True
    return visible_mask


def _ambiguous_rows_visible(domain: PolygonalDomain, starts: np.ndarray,
                            ends: np.ndarray) -> np.ndarray:
    """Contact-subdivision resolution for a batch of grazing-suspect rows.

    All contact parameters are produced by broadcast arithmetic; the only
    per-row Python work is sorting a handful of parameters, and every
    midpoint containment query goes through one vectorized call.
    """
    tau = domain.tol.tau_abs
    e1, e2 = _edge_arrays(domain)
    s = e2 - e1
    e_len = np.hypot(s[:, 0], s[:, 1])

    r = ends - starts                                  # (m, 2)
    L = np.hypot(r[:, 0], r[:, 1])
    L2 = np.maximum(L * L, 1e-300)
    qp = e1[None, :, :] - starts[:, None, :]           # (m, E, 2)
    den = r[:, None, 0] * s[None, :, 1] - r[:, None, 1] * s[None, :, 0]
    t_num = qp[..., 0] * s[None, :, 1] - qp[..., 1] * s[None, :, 0]
    u_num = qp[..., 0] * r[:, None, 1] - qp[..., 1] * r[:, None, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t_num / den
        u = -u_num / den
    pad_t = (tau / np.maximum(L, 1e-300))[:, None]
    pad_u = (tau / np.maximum(e_len, 1e-300))[None, :]
    nonpar = np.abs(den) > 1e-14 * (L[:, None] * e_len[None, :])
    hit = nonpar & (t >= -pad_t) & (t <= 1.0 + pad_t) & (u >= -pad_u) & (u <= 1.0 + pad_u)

    # Edge endpoints within tau of each segment (collinear overlap support).
    prox_params = []
    for pts in (e1, e2):
        rel = pts[None, :, :] - starts[:, None, :]
        proj = np.clip((rel[..., 0] * r[:, None, 0] + rel[..., 1] * r[:, None, 1])
                       / L2[:, None], 0.0, 1.0)
        cx = starts[:, None, 0] + proj * r[:, None, 0]
        cy = starts[:, None, 1] + proj * r[:, None, 1]
        near = np.hypot(pts[None, :, 0] - cx, pts[None, :, 1] - cy) <= tau
        prox_params.append((proj, near))

    all_mids: list[tuple[int, float]] = []
    m = len(starts)
    for i in range(m):
        params = [0.0, 1.0]
        params.extend(np.clip(t[i][hit[i]], 0.0, 1.0))
        for proj, near in prox_params:
            params.extend(proj[i][near[i]])
        params = sorted(set(params))
        min_gap = 2.0 * tau / max(L[i], 1e-300)
        for t0, t1 in zip(params, params[1:]):
            if t1 - t0 > min_gap:
                all_mids.append((i, 0.5 * (t0 + t1)))
    out = np.ones(m, dtype=bool)
    if all_mids:
        idx = np.array([i for i, _ in all_mids])
        tm = np.array([v for _, v in all_mids])
        mids = starts[idx] + tm[:, None] * r[idx]
        inside = domain.contains_mask(mids)
        np.logical_and.at(out, idx, inside)
    return out


def visible_mask_to_corners(domain: PolygonalDomain, p: PointLike) -> np.ndarray:
    """Boolean mask over corners() marking the ones visible from p."""
    p = as_point(p)
    corners = domain.corner_array()
    starts = np.repeat([[p.x, p.y]], len(corners), axis=0)
    return segments_visible(domain, starts, corners)


def visible_corners(domain: PolygonalDomain, p: PointLike) -> list[int]:
    """Indices of corners visible from p (order of domain.corners())."""
    p = as_point(p)
    if domain.contains(p) == "outside":
        raise ValueError(f"point outside domain: {p}")
    return [int(i) for i in np.nonzero(visible_mask_to_corners(domain, p))[0]]


@dataclass(frozen=True)
class VisibilityGraph:
    """Mutual-visibility graph on the domain corners.

    adjacency is a symmetric boolean matrix; weights holds Euclidean lengths
    (inf where there is no edge).
    """

    adjacency: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def edge_count(self) -> int:
        return int(np.triu(self.adjacency, 1).sum())

    def is_connected(self) -> bool:
        n = self.n
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            u = stack.pop()
            for v in np.nonzero(self.adjacency[u] & ~seen)[0]:
                seen[v] = True
                stack.append(int(v))
        return bool(seen.all())


def visibility_graph(domain: PolygonalDomain) -> VisibilityGraph:
    """Build (and cache) the corner visibility graph by pairwise tests."""
    cache = domain._cache
    if "visibility_graph" in cache:
        return cache["visibility_graph"]  # type: ignore[return-value]
    corners = domain.corner_array()
    n = len(corners)
    adjacency = np.zeros((n, n), dtype=bool)
    for i in range(n - 1):
        starts = np.repeat(corners[i][None, :], n - i - 1, axis=0)
        vis = segments_visible(domain, starts, corners[i + 1:])
        adjacency[i, i + 1:] = vis
        adjacency[i + 1:, i] = vis
    diffs = corners[:, None, :] - corners[None, :, :]
    weights = np.where(adjacency, np.hypot(diffs[..., 0], diffs[..., 1]), np.inf)
    graph = VisibilityGraph(adjacency=adjacency, weights=weights)
    cache["visibility_graph"] = graph
    return graph
