"""Command-line front end.

Subcommands: validate, dist, spm, farthest, center, diameter, check, gen.
Structured results go to stdout as JSON with 12-significant-digit numbers;
figures are written to the path given by --svg.  Exit codes: 0 success,
1 validation/input failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import report
from .center import approx_center, approx_diameter, grid_candidates, refine_center
from .domain import PolygonalDomain, load_domain, save_domain, validate
from .geodesic import geodesic_distance
from .oracle import check_lemma1, random_domain
from .spm import build_spm, farthest_neighbors


def _round12(obj):
    """Recursively format numbers to 12 significant digits."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return repr(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(data: dict) -> None:
    print(json.dumps(_round12(data), indent=1))


def _parse_point(text: str) -> tuple[float, float]:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected X,Y got {text!r}") from exc
    return x, y


def _load(path: str) -> PolygonalDomain:
    return load_domain(path)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geodomain",
                                 description="Geodesic distances, shortest path maps "
                                             "and center approximation in polygonal "
                                             "domains with holes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a domain file")
    p.add_argument("domain")

    p = sub.add_parser("dist", help="geodesic distance between two points")
    p.add_argument("--from", dest="src", type=_parse_point, required=True, metavar="X,Y")
    p.add_argument("--to", dest="dst", type=_parse_point, required=True, metavar="X,Y")
    p.add_argument("domain")

    p = sub.add_parser("spm", help="build the shortest path map of a source")
    p.add_argument("--source", type=_parse_point, required=True, metavar="X,Y")
    p.add_argument("--out", help="write the structured dump to this file")
    p.add_argument("--svg", help="render the map to this figure file")
    p.add_argument("domain")

    p = sub.add_parser("farthest", help="farthest neighbors of a point")
    p.add_argument("--point", type=_parse_point, required=True, metavar="X,Y")
    p.add_argument("domain")

    p = sub.add_parser("center", help="certified center approximation")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=0.0,
                   help="also run local refinement down to this step")
    p.add_argument("--svg", help="render the overlay to this figure file")
    p.add_argument("domain")

    p = sub.add_parser("diameter", help="certified diameter approximation")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("domain")

    p = sub.add_parser("check", help="run the brute-force farthest-neighbor check")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--k", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("domain")

    p = sub.add_parser("gen", help="generate a seeded random domain file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--holes", type=int, default=None)
    p.add_argument("--out", required=True)
    return ap


def run(argv: list[str]) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        return _dispatch(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "validate":
        with open(args.domain, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        domain, rep = validate(data.get("outer", []), data.get("holes", []))
        _emit({
            "ok": rep.ok,
            "violations": [
                {"kind": v.kind, "ring": v.ring, "indices": list(v.indices),
                 "witness": [v.witness.x, v.witness.y] if v.witness else None}
                for v in rep.violations
            ],
            "corrections": list(rep.corrections),
            "corners": domain.n if domain else None,
            "holes": domain.h if domain else None,
        })
        return 0 if rep.ok else 1

    if args.command == "dist":
        domain = _load(args.domain)
        d, path = geodesic_distance(domain, args.src, args.dst)
        print(f"{d:.12g}")
        _emit({
            "distance": d,
            "direct": len(path.corners) == 0,
            "corners": list(path.corners),
            "polyline": [[p.x, p.y] for p in path.polyline()],
        })
        return 0

    if args.command == "spm":
        domain = _load(args.domain)
        spm = build_spm(domain, args.source)
        dump = report.spm_to_dict(spm)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(_round12(dump), fh, indent=1)
        if args.svg:
            report.render_spm(spm, args.svg)
        _emit({"source": dump["source"], "counts": dump["counts"],
               "files": {"out": args.out, "svg": args.svg}})
        return 0

    if args.command == "farthest":
        domain = _load(args.domain)
        value, witnesses = farthest_neighbors(domain, args.point)
        _emit({
            "phi": value,
            "witnesses": [
                {"position": [w.position.x, w.position.y], "kind": w.kind,
                 "class": w.multiplicity_class, "distance": w.distance}
                for w in witnesses
            ],
        })
        return 0

    if args.command == "center":
        domain = _load(args.domain)
        estimate = approx_center(domain, args.eps)
        refined = None
        if args.tol > 0.0:
            refined = refine_center(domain, estimate.point, args.tol,
                                    lower=estimate.lower)
        final = refined or estimate
        if args.svg:
            grid = grid_candidates(domain, args.eps).points
            report.render_center(domain, final, args.svg, grid=grid)
        _emit({
            "center": [final.point.x, final.point.y],
            "upper": final.upper,
            "lower": estimate.lower,
            "eps": args.eps,
            "witnesses": [[w.position.x, w.position.y] for w in final.witnesses],
            "candidates_evaluated": estimate.candidates_evaluated,
            "near_ties": [[p.x, p.y] for p in estimate.near_ties],
            "refined": refined is not None,
        })
        return 0

    if args.command == "diameter":
        domain = _load(args.domain)
        est = approx_diameter(domain, args.eps)
        _emit({
            "lower": est.lower,
            "upper": est.upper,
            "eps": args.eps,
            "pair": [[est.pair[0].x, est.pair[0].y], [est.pair[1].x, est.pair[1].y]],
        })
        return 0

    if args.command == "check":
        domain = _load(args.domain)
        rep = check_lemma1(domain, trials=args.trials, k=args.k, seed=args.seed)
        _emit({
            "trials": len(rep.trials),
            "passes": rep.passes,
            "ok": rep.ok,
            "k": rep.k,
            "bound": rep.distance_bound,
            "failures": [
                {"point": [t.point.x, t.point.y], "reason": t.reason}
                for t in rep.trials if not t.ok
            ],
        })
        return 0 if rep.ok else 1

    if args.command == "gen":
        domain = random_domain(args.seed, holes=args.holes)
        save_domain(domain, args.out)
        _emit({"path": args.out, "corners": domain.n, "holes": domain.h,
               "seed": args.seed})
        return 0

    return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
