"""Scratch: tune the three-lobe fixture until the farthest points are
interior triple vertices with comfortable margins."""
import math
import numpy as np

from geodomain.domain import PolygonalDomain
from geodomain.spm import farthest_neighbors, build_spm
from geodomain.oracle import brute_phi


def rot(pts, ang):
    c, s = math.cos(ang), math.sin(ang)
    return [(c * x - s * y, s * x + c * y) for x, y in pts]


def build(A, B, s2, top, t_y, passw, teeth, W, x_pad, seam, entry_x, pinch=None, g=0.28):
    """One lobe along +x, rotated threefold.

    teeth: list of (x0, x1, side): side=+1 tooth from the bottom hole rising
    to +t_y (with a notch in the upper hole), side=-1 mirrored.  pinch =
    (x0, x1, hw): both holes narrow the corridor to half-width hw.
    """
    def hole(sign):
        edge = []     # (x0, x1, y) pieces of the inner edge (towards axis)
        cur = A
        for x0, x1, side in teeth:
            if side == sign:
                edge.append((cur, x0, s2))
                edge.append((x0, x1, -t_y))
                cur = x1
            else:
                nx0, nx1 = x0 - g, x1 + g
                edge.append((cur, nx0, s2))
                edge.append((nx0, nx1, t_y + passw))
                cur = nx1
        if pinch is not None:
            px0, px1, hw = pinch
            edge.append((cur, px0, s2))
            edge.append((px0, px1, hw))
            cur = px1
        edge.append((cur, B, s2))
        pts = []
        for x0, x1, y in edge:
            pts.append((x0, y * sign))
            pts.append((x1, y * sign))
        ring = [(A, top * sign)] + pts + [(B, top * sign)]
        if sign < 0:
            ring = ring[::-1]
        return ring

    hole_up = hole(+1)
    hole_dn = hole(-1)
    x_out = B + x_pad
    sx, sy = seam * math.cos(math.pi / 3), seam * math.sin(math.pi / 3)
    outline = [(sx, -sy), (entry_x, -W), (x_out, -W), (x_out, W), (entry_x, W), (sx, sy)]
    outer, holes = [], []
    for k in range(3):
        ang = 2 * math.pi * k / 3
        outer.extend(rot(outline, ang))
        holes.append(rot(hole_up, ang))
        holes.append(rot(hole_dn, ang))
    return PolygonalDomain.build(outer, holes)


def evaluate(dom, label, verbose=False):
    val, wits = farthest_neighbors(dom, (0.0, 0.0))
    spm = build_spm(dom, (0.0, 0.0), cells=False)
    vs = sorted(spm.vertices, key=lambda v: -v.distance)
    fourth = vs[3].distance if len(vs) > 3 else -1
    kinds = [w.kind for w in wits]
    mults = [w.multiplicity for w in wits]
    ok = (len(wits) == 3 and all(k == "interior" for k in kinds)
          and all(m >= 3 for m in mults) and val - fourth > 1e-3)
    print(f'{label}: n={dom.n} phi={val:.6f} wits={len(wits)} kinds={kinds} mult={mults} '
          f'margin4th={val - fourth:.4f} {"PASS" if ok else "fail"}')
    if verbose or ok:
        for v in vs[:6]:
            print('   ', v.kind, (round(v.position.x, 4), round(v.position.y, 4)),
                  round(v.distance, 5), v.roots)
    return ok


if __name__ == "__main__":
    cands = [
        dict(A=1.8, B=6.0, s2=0.38, top=1.25, t_y=0.62, passw=0.40,
             teeth=[(2.5, 3.1, +1), (3.6, 4.2, -1)],
             pinch=(4.8, 5.2, 0.19),
             W=2.35, x_pad=0.4, seam=1.45, entry_x=2.1),
        dict(A=1.8, B=6.3, s2=0.38, top=1.2, t_y=0.66, passw=0.40,
             teeth=[(2.4, 3.0, +1), (3.5, 4.1, -1), (4.6, 5.2, +1)],
             pinch=(5.6, 5.95, 0.19),
             W=2.3, x_pad=0.35, seam=1.45, entry_x=2.1),
        dict(A=1.7, B=6.5, s2=0.40, top=1.15, t_y=0.68, passw=0.42,
             teeth=[(2.3, 2.9, +1), (3.4, 4.0, -1), (4.5, 5.1, +1), (5.4, 5.8, -1)],
             pinch=(6.05, 6.3, 0.20),
             W=2.2, x_pad=0.3, seam=1.45, entry_x=2.0),
    ]
    for i, cfg in enumerate(cands):
        try:
            dom = build(**cfg)
        except ValueError as exc:
            print(f'cand {i}: INVALID {exc}')
            continue
        evaluate(dom, f'cand {i}', verbose=(i == 0))
