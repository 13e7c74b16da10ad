"""Scratch: leaner three-lobe topology.

Lobe = central rectangular hole with channels above/below, closed by a
vertical slit between the hole's far edge and the outer wall.  Two wall
protrusions flank the slit so the top/bottom wavefronts carry straddling
roots on both sides; they meet at a four-way interior vertex on the axis.
"""
import math
import time

from geodomain.domain import PolygonalDomain
from geodomain.spm import farthest_neighbors, build_spm


def rot(pts, ang):
    c, s = math.cos(ang), math.sin(ang)
    return [(c * x - s * y, s * x + c * y) for x, y in pts]


def build(A, B, y_h, W, x_out, b_d, p_hi, seam, entry_x):
    """One lobe along +x rotated threefold.

    Hole [A,B] x [-y_h,y_h]; outer wall at x_out with one solid central bump
    of depth b_d spanning y in [-p_hi, p_hi].
    """
    outline = [
        (seam * math.cos(math.pi / 3), -seam * math.sin(math.pi / 3)),
        (entry_x, -W), (x_out, -W),
        (x_out, -p_hi), (x_out - b_d, -p_hi), (x_out - b_d, p_hi), (x_out, p_hi),
        (x_out, W), (entry_x, W),
        (seam * math.cos(math.pi / 3), seam * math.sin(math.pi / 3)),
    ]
    hole = [(A, -y_h), (B, -y_h), (B, y_h), (A, y_h)]
    outer, holes = [], []
    for k in range(3):
        ang = 2 * math.pi * k / 3
        outer.extend(rot(outline, ang))
        holes.append(rot(hole, ang))
    return PolygonalDomain.build(outer, holes)


def evaluate(dom, label, verbose=True):
    t0 = time.time()
    val, wits = farthest_neighbors(dom, (0.0, 0.0))
    dt = time.time() - t0
    t0 = time.time()
    farthest_neighbors(dom, (0.05, 0.03))
    dt_warm = time.time() - t0
    spm = build_spm(dom, (0.0, 0.0), cells=False)
    vs = sorted(spm.vertices, key=lambda v: -v.distance)
    fourth = vs[3].distance if len(vs) > 3 else -1
    kinds = [w.kind for w in wits]
    mults = [w.multiplicity for w in wits]
    ok = (len(wits) == 3 and all(k == "interior" for k in kinds)
          and all(m >= 3 for m in mults) and val - fourth > 1e-3)
    print(f'{label}: n={dom.n} phi={val:.6f} wits={len(wits)} kinds={kinds} '
          f'mult={mults} margin4th={val - fourth:.4f} eval={dt:.2f}s warm={dt_warm:.2f}s '
          f'{"PASS" if ok else "fail"}')
    if verbose:
        for v in vs[:6]:
            print('   ', v.kind, (round(v.position.x, 4), round(v.position.y, 4)),
                  round(v.distance, 5), v.roots)
    return ok


if __name__ == "__main__":
    cands = [
        dict(A=2.2, B=6.2, y_h=1.8, W=2.6, x_out=7.4, b_d=0.7,
             p_hi=1.0, seam=1.5, entry_x=2.2),
        dict(A=2.2, B=6.4, y_h=1.9, W=2.7, x_out=7.6, b_d=0.75,
             p_hi=1.1, seam=1.5, entry_x=2.2),
        dict(A=2.4, B=6.0, y_h=2.0, W=2.8, x_out=7.4, b_d=0.8,
             p_hi=1.2, seam=1.5, entry_x=2.4),
        dict(A=2.2, B=6.2, y_h=1.8, W=2.5, x_out=7.3, b_d=0.65,
             p_hi=0.9, seam=1.5, entry_x=2.2),
    ]
    for i, cfg in enumerate(cands):
        try:
            dom = build(**cfg)
        except ValueError as exc:
            print(f'cand {i}: INVALID {exc}')
            continue
        evaluate(dom, f'cand {i}', verbose=(i == 0))
