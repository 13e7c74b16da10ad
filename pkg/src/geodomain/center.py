"""Geodesic radius and center machinery.

The certified route is the grid approximation: scale the domain to a unit
square, lay a grid of step eps/(4*sqrt(2)), evaluate the farthest-distance
objective on every grid point inside the domain (plus boundary/grid-line
intersections and all corners), and return the best candidate.  Because the
domain always spans its bounding box, the radius is at least half the longest
bbox side after scaling, which makes the grid constant conservative enough
for the (1+eps) certificate.

Local refinement is a compass search: it polishes the center estimate but
never touches the certified lower bound.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .domain import PolygonalDomain
from .geodesic import corner_distance_table, geodesic_distance
from .primitives import Point, PointLike, as_point
from .spm import SpmVertex, farthest_neighbors
from .visibility import segments_visible


GRID_FACTOR = 4.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class CandidateSet:
    """Grid candidates: lattice points in the domain, boundary crossings of
    grid lines, and all corners."""

    eps: float
    step: float                  # world units
    points: np.ndarray           # (m, 2), deterministic order
    lattice_count: int
    boundary_count: int
    corner_count: int

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class CenterEstimate:
    point: Point
    upper: float                 # the farthest distance at point
    lower: float                 # certified lower bound on the radius
    eps: float
    witnesses: tuple[SpmVertex, ...]
    candidates_evaluated: int
    near_ties: tuple[Point, ...] = field(default=())


class DiameterEstimate(NamedTuple):
    lower: float
    upper: float
    pair: tuple[Point, Point]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GEODESIC_THREADS", "1")))
    except ValueError:
        return 1


def two_approx_radius(domain: PolygonalDomain, s: PointLike) -> tuple[float, float]:
    """Bracket the radius from one farthest-distance query: [Phi/2, Phi]."""
    s = as_point(s)
    u = farthest_neighbors(domain, s)[0]
    return u / 2.0, u


def grid_candidates(domain: PolygonalDomain, eps: float) -> CandidateSet:
    """Candidate centers for the (1+eps) certificate."""
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    x0, y0, x1, y1 = domain.bbox
    side = max(x1 - x0, y1 - y0)
    step = eps / GRID_FACTOR * side

    ix = np.arange(0, math.floor((x1 - x0) / step) + 1)
    iy = np.arange(0, math.floor((y1 - y0) / step) + 1)
    xs = x0 + ix * step
    ys = y0 + iy * step
    gx, gy = np.meshgrid(xs, ys)
    lattice = np.column_stack([gx.ravel(), gy.ravel()])
    lattice = lattice[domain.contains_mask(lattice)]

    crossings: list[tuple[float, float]] = []
    for a, b, _, _ in domain.edges():
        axv, ayv, bxv, byv = a.x, a.y, b.x, b.y
        if axv != bxv:
            lo, hi = sorted((axv, bxv))
            for xv in xs[(xs >= lo) & (xs <= hi)]:
                t = (xv - axv) / (bxv - axv)
                if 0.0 <= t <= 1.0:
                    crossings.append((xv, ayv + t * (byv - ayv)))
        if ayv != byv:
            lo, hi = sorted((ayv, byv))
            for yv in ys[(ys >= lo) & (ys <= hi)]:
                t = (yv - ayv) / (byv - ayv)
                if 0.0 <= t <= 1.0:
                    crossings.append((axv + t * (bxv - axv), yv))
    corners = domain.corner_array()

    merge = 1e-9 * domain.bbox_diag
    seen: dict[tuple[int, int], None] = {}
    out: list[tuple[float, float]] = []
    counts = [0, 0, 0]
    for group, pts in enumerate((lattice, np.array(crossings).reshape(-1, 2), corners)):
        for x, y in pts:
            key = (round(x / merge), round(y / merge))
            if key in seen:
                continue
            seen[key] = None
            out.append((float(x), float(y)))
            counts[group] += 1
    pts = np.array(sorted(out))
    return CandidateSet(eps=eps, step=step, points=pts,
                        lattice_count=counts[0], boundary_count=counts[1],
                        corner_count=counts[2])


def phi_lower_bounds(domain: PolygonalDomain, points: np.ndarray) -> np.ndarray:
    """Sound per-point lower bounds on the farthest distance.

    Corners belong to the domain, so max over corners of d(z, v) never
    exceeds the true farthest distance from z.
    """
    points = np.asarray(points, dtype=float)
    corners = domain.corner_array()
    n = len(corners)
    table = corner_distance_table(domain)
    m = len(points)
    starts = np.repeat(points, n, axis=0)
    ends = np.tile(corners, (m, 1))
    vis = segments_visible(domain, starts, ends).reshape(m, n)
    hops = np.hypot(points[:, 0][:, None] - corners[None, :, 0],
                    points[:, 1][:, None] - corners[None, :, 1])
    hops = np.where(vis, hops, np.inf)
    out = np.empty(m)
    chunk = max(1, 2_000_000 // max(n * n, 1))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        w = np.min(hops[lo:hi, :, None] + table[None, :, :], axis=1)
        out[lo:hi] = w.max(axis=1)
    return out


def _phi_argmin(domain: PolygonalDomain, points: np.ndarray) -> tuple[int, float, np.ndarray, int]:
    """Exact argmin of the farthest distance over candidate points.

    Candidates whose lower bound exceeds the best exact value found so far
    cannot win and are skipped; ties resolve to the lexicographically
    smallest point.  Returns (index, value, values-array with +inf for
    skipped candidates, evaluations).
    """
    lb = phi_lower_bounds(domain, points)
    order = sorted(range(len(points)),
                   key=lambda i: (lb[i], points[i][0], points[i][1]))
    values = np.full(len(points), np.inf)
    best_i, best_v = -1, math.inf
    evaluated = 0

    def run(idx: int) -> float:
        return farthest_neighbors(domain, tuple(points[idx]))[0]

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batch = []
            for i in order:
                if lb[i] > best_v + 1e-15:
                    continue
                batch.append(i)
                if len(batch) == workers:
                    for j, v in zip(batch, pool.map(run, batch)):
                        values[j] = v
                        evaluated += 1
                        if v < best_v or (v == best_v and tuple(points[j]) < tuple(points[best_i])):
                            best_i, best_v = j, v
                    batch = []
            for j, v in zip(batch, pool.map(run, batch)):
                values[j] = v
                evaluated += 1
                if v < best_v or (v == best_v and tuple(points[j]) < tuple(points[best_i])):
                    best_i, best_v = j, v
    else:
        for i in order:
            if lb[i] > best_v + 1e-15:
                continue
            v = run(i)
            values[i] = v
            evaluated += 1
            if v < best_v or (v == best_v and tuple(points[i]) < tuple(points[best_i])):
                best_i, best_v = i, v
    return best_i, best_v, values, evaluated


def approx_center(domain: PolygonalDomain, eps: float) -> CenterEstimate:
    """(1+eps)-certified center estimate over the grid candidates.

    The argmin of the farthest distance over the candidate set is computed
    exactly; candidates are skipped only when their lower bound proves they
    cannot attain it.
    """
    cand = grid_candidates(domain, eps)
    best, upper, values, _ = _phi_argmin(domain, cand.points)
    c = Point(*cand.points[best])
    tie_tol = max(domain.tol.tau_abs, 1e-9 * upper)
    ties = tuple(Point(*cand.points[i]) for i in np.nonzero(values <= upper + tie_tol)[0]
                 if i != best)
    _, witnesses = farthest_neighbors(domain, c)
    return CenterEstimate(point=c, upper=upper, lower=upper / (1.0 + eps), eps=eps,
                          witnesses=tuple(witnesses),
                          candidates_evaluated=len(cand), near_ties=ties)


_COMPASS = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]


def refine_center(domain: PolygonalDomain, start: PointLike, tol: float,
                  lower: float | None = None) -> CenterEstimate:
    """Compass-search descent on the farthest-distance objective.

    Heuristic: the returned upper bound never exceeds the start value, and
    the certified lower bound is either the caller's (from the grid) or the
    generic half-of-upper bound.
    """
    start = as_point(start)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if domain.contains(start) == "outside":
        raise ValueError(f"start outside domain: {start}")
    cur = np.array([start.x, start.y])
    cur_val = farthest_neighbors(domain, tuple(cur))[0]
    step = max(tol * 4.0, 0.02 * domain.bbox_diag)
    evaluated = 1
    while step >= tol:
        improved = False
        for dx, dy in _COMPASS:
            nxt = cur + step * np.array([dx, dy])
            if domain.contains(tuple(nxt)) == "outside":
                continue
            val = farthest_neighbors(domain, tuple(nxt))[0]
            evaluated += 1
            if val < cur_val - 1e-15 * (1.0 + cur_val):
                cur, cur_val = nxt, val
                improved = True
                break
        if not improved:
            step *= 0.5
    upper, witnesses = farthest_neighbors(domain, tuple(cur))
    base = upper / 2.0
    lo = max(base, lower) if lower is not None else base
    lo = min(lo, upper)
    eps_eff = upper / lo - 1.0 if lo > 0 else 1.0
    return CenterEstimate(point=Point(*cur), upper=upper, lower=lo, eps=eps_eff,
                          witnesses=tuple(witnesses), candidates_evaluated=evaluated)


def approx_diameter(domain: PolygonalDomain, eps: float) -> DiameterEstimate:
    """(1+eps) bracket of the geodesic diameter from grid-pair distances."""
    cand = grid_candidates(domain, eps)
    pts = cand.points
    m = len(pts)
    corners = domain.corner_array()
    n = len(corners)
    table = corner_distance_table(domain)

    starts = np.repeat(pts, n, axis=0)
    ends = np.tile(corners, (m, 1))
    vis = segments_visible(domain, starts, ends).reshape(m, n)
    hops = np.hypot(pts[:, 0][:, None] - corners[None, :, 0],
                    pts[:, 1][:, None] - corners[None, :, 1])
    hops = np.where(vis, hops, np.inf)

    # W[z, v] = d(z, corner v); route upper bound DU >= true distance.
    W = np.empty((m, n))
    chunk = max(1, 2_000_000 // (n * n))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        W[lo:hi] = np.min(hops[lo:hi, :, None] + table[None, :, :], axis=1)

    def row_du(i: int) -> np.ndarray:
        du = np.min(W[i][None, :] + hops, axis=1)     # min over last corner
        du[: i + 1] = -np.inf
        return du

    row_best = np.empty(m)
    for i in range(m):
        du = row_du(i)
        row_best[i] = du.max() if m > 1 else -np.inf

    # Branch and bound: the route bound DU dominates the true distance, so a
    # row whose best DU falls below the incumbent cannot improve it.
    best_exact = 0.0
    best_pair = (Point(*pts[0]), Point(*pts[min(1, m - 1)]))
    for i in np.argsort(-row_best):
        if row_best[i] <= best_exact:
            break
        du = row_du(int(i))
        for j in np.argsort(-du):
            if du[j] <= best_exact:
                break
            d, _ = geodesic_distance(domain, tuple(pts[i]), tuple(pts[j]))
            if d > best_exact:
                best_exact = d
                best_pair = (Point(*pts[i]), Point(*pts[int(j)]))
    return DiameterEstimate(lower=best_exact, upper=(1.0 + eps) * best_exact,
                            pair=best_pair)
