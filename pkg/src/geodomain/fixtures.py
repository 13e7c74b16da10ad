"""Canonical domains used by the test suite, the docs and demos."""

from __future__ import annotations

import math

import numpy as np

from .domain import PolygonalDomain


def unit_square() -> PolygonalDomain:
    return PolygonalDomain.build([(0, 0), (1, 0), (1, 1), (0, 1)])


def equilateral_triangle(side: float = 1.0) -> PolygonalDomain:
    h = side * math.sqrt(3.0) / 2.0
    return PolygonalDomain.build([(0, 0), (side, 0), (side / 2.0, h)])


def square_with_hole() -> PolygonalDomain:
    """10 x 10 square with the square hole [4,6] x [4,6]."""
    return PolygonalDomain.build(
        [(0, 0), (10, 0), (10, 10), (0, 10)],
        [[(4, 4), (6, 4), (6, 6), (4, 6)]],
    )


def _rotate(points: list[tuple[float, float]], angle: float) -> list[tuple[float, float]]:
    c, s = math.cos(angle), math.sin(angle)
    return [(c * x - s * y, s * x + c * y) for x, y in points]


def three_lobe() -> PolygonalDomain:
    """Three-fold symmetric domain whose center and farthest points are interior.

    Each lobe holds two holes separated by a narrow zig-zag slit (two deep
    interlocking teeth and a final symmetric pinch).  Paths from the hub
    reach deep slit points either through the slit or around the holes; their
    meeting point in the slit's exit section is an interior vertex of the map
    with three incident cells.  By symmetry the three lobes produce three
    equidistant farthest points, pinning the unique center to the rotational
    fixed point at the origin.
    """
    # Coordinates carry small irrational-looking offsets: exact collinear
    # corner chains are degenerate for the map construction, and the
    # three-fold symmetry only needs the lobes to be identical.
    A, B = 1.7131, 7.2097      # slit x-extent
    s2 = 0.4531                # slit half-width
    top = 2.3109               # hole outer |y|
    t_y = 1.5079               # tooth reach past the axis
    passw = 0.4217             # passage width over a tooth
    teeth = [(2.2139, 2.8067, +1), (3.6151, 4.2083, -1)]
    pinch = (5.0123, 5.4061, 0.2243)
    W = 3.1087                 # lobe half-height
    x_out = B + 0.3043
    g = 0.2829                 # notch x-margin around a tooth

    def hole(sign: int) -> list[tuple[float, float]]:
        edge = []              # (x0, x1, y) pieces of the slit-facing edge
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
        px0, px1, hw = pinch
        edge.append((cur, px0, s2))
        edge.append((px0, px1, hw))
        cur = px1
        edge.append((cur, B, s2))
        pts: list[tuple[float, float]] = []
        for x0, x1, y in edge:
            pts.append((x0, y * sign))
            pts.append((x1, y * sign))
        ring = [(A, top * sign)] + pts + [(B, top * sign)]
        return ring[::-1] if sign < 0 else ring

    seam = 1.45
    sx, sy = seam * math.cos(math.pi / 3.0), seam * math.sin(math.pi / 3.0)
    lobe_outline = [
        (sx, -sy), (2.0, -W), (x_out, -W), (x_out, W), (2.0, W), (sx, sy),
    ]

    outer: list[tuple[float, float]] = []
    holes: list[list[tuple[float, float]]] = []
    for k in range(3):
        angle = 2.0 * math.pi * k / 3.0
        outer.extend(_rotate(lobe_outline, angle))
        holes.append(_rotate(hole(+1), angle))
        holes.append(_rotate(hole(-1), angle))
    return PolygonalDomain.build(outer, holes)


def three_lobe_center() -> tuple[float, float]:
    """The rotational fixed point of the three-lobe fixture."""
    return (0.0, 0.0)


FIXTURES = {
    "unit_square": unit_square,
    "equilateral_triangle": equilateral_triangle,
    "square_with_hole": square_with_hole,
    "three_lobe": three_lobe,
}
