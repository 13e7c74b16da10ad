"""Scratch: tilted-slit three-lobe topology.

Lobe = two parallelogram holes separated by a narrow slit that climbs at an
angle, so it is long relative to the around-route and not radially aligned
with the hub.  Both slit mouths have corners on both sides, so the wavefront
meeting deep inside the slit is a four-root interior vertex.
"""
import itertools
import math
import time

import numpy as np

from geodomain.domain import validate
from geodomain.spm import farthest_neighbors, build_spm


def rot(pts, ang):
    c, s = math.cos(ang), math.sin(ang)
    return [(c * x - s * y, s * x + c * y) for x, y in pts]


def build(A, B, e_y, rise, h_s, top, bot, W, pad, seam, entry_x):
    """Slit centerline (A, e_y) -> (B, e_y + rise), half-width h_s."""
    ax, ay = A, e_y
    bx, by = B, e_y + rise
    dx, dy = bx - ax, by - ay
    ln = math.hypot(dx, dy)
    nx, ny = -dy / ln, dx / ln      # unit normal (points up-left)
    up_a = (ax + h_s * nx, ay + h_s * ny)
    up_b = (bx + h_s * nx, by + h_s * ny)
    dn_a = (ax - h_s * nx, ay - h_s * ny)
    dn_b = (bx - h_s * nx, by - h_s * ny)
    hole_up = [up_a, up_b, (up_b[0], top), (up_a[0], top)]
    hole_dn = [(dn_a[0], bot), (dn_b[0], bot), dn_b, dn_a]
    x_out = B + pad
    outline = [
        (seam * math.cos(math.pi / 3), -seam * math.sin(math.pi / 3)),
        (entry_x, -W), (x_out, -W), (x_out, W), (entry_x, W),
        (seam * math.cos(math.pi / 3), seam * math.sin(math.pi / 3)),
    ]
    outer, holes = [], []
    for k in range(3):
        ang = 2 * math.pi * k / 3
        outer.extend(rot(outline, ang))
        holes.append(rot(hole_up, ang))
        holes.append(rot(hole_dn, ang))
    dom, rep = validate(outer, holes)
    if dom is None:
        raise ValueError("; ".join(v.describe() for v in rep.violations))
    return dom


def evaluate(dom, label, verbose=False):
    t0 = time.time()
    val, wits = farthest_neighbors(dom, (0.0, 0.0))
    dt = time.time() - t0
    spm = build_spm(dom, (0.0, 0.0), cells=False)
    vs = sorted(spm.vertices, key=lambda v: -v.distance)
    fourth = vs[3].distance if len(vs) > 3 else -1
    kinds = [w.kind for w in wits]
    mults = [w.multiplicity for w in wits]
    ok = (len(wits) == 3 and all(k == "interior" for k in kinds)
          and all(m >= 3 for m in mults) and val - fourth > 5e-3)
    print(f'{label}: n={dom.n} phi={val:.5f} wits={len(wits)} kinds={set(kinds)} '
          f'mult={mults} margin4={val - fourth:.4f} eval={dt:.2f}s '
          f'{"PASS" if ok else "fail"}')
    if verbose:
        for v in vs[:6]:
            print('   ', v.kind, (round(v.position.x, 4), round(v.position.y, 4)),
                  round(v.distance, 5), v.roots)
    return ok


if __name__ == "__main__":
    found = []
    for rise, e_y, top, pad, h_s in itertools.product(
            (2.0, 2.6, 3.2), (-1.6, -1.2), (2.3, 2.6), (0.5, 0.8), (0.28,)):
        W = top + 0.9
        cfg = dict(A=2.3, B=6.4, e_y=e_y, rise=rise, h_s=h_s, top=top,
                   bot=e_y - 1.2, W=W, pad=pad, seam=1.5, entry_x=2.2)
        if e_y + rise > top - 0.5:      # slit exit must stay below the hole top
            continue
        try:
            dom = build(**cfg)
        except ValueError as exc:
            print('invalid', (rise, e_y, top, pad), str(exc)[:60])
            continue
        if evaluate(dom, f'rise={rise} ey={e_y} top={top} pad={pad}'):
            found.append(cfg)
    print('passing:', len(found))
    if found:
        print(found[0])
        evaluate(build(**found[0]), 'best', verbose=True)
