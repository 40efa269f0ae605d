"""Command line interface.

Single values print as JSON objects (floats in shortest round-trip form);
grids and paths print as CSV with a header row, 17 significant digits and LF
line endings.  Exit codes: 0 success, 1 domain error, 2 numerical
non-convergence, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .canonical import (CanonicalSequence, MomentSequence, from_canonical,
                        to_canonical)
from .embedding import moment_centroid, rho_distance
from .errors import BoundaryEscapeError, ConvergenceError, DomainError
from .frechet import frechet_mean
from .geodesy import (TangentVector, clt_limit_distance, distance, exp_map,
                      log_map)
from .metric import (BetaPoint, _curvature_values, christoffel, det_metric,
                     det_metric_lower_bound, det_metric_quadrature,
                     metric_tensor, sectional_curvature)

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 64 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _parse_point(text: str) -> BetaPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"expected a point 'a,b', got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise DomainError(f"could not parse point {text!r}") from exc
    return BetaPoint(a, b)


def _parse_pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"expected 'x,y', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise DomainError(f"could not parse pair {text!r}") from exc


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"could not parse number list {text!r}") from exc


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


def _points_argument(args) -> list[BetaPoint]:
    if args.file:
        return [_parse_point(ln) for ln in _read_lines(args.file)]
    if not args.points:
        raise DomainError("provide --points or --file")
    return [_parse_point(tok) for tok in args.points.split(";") if tok.strip()]


def _sequences_argument(args) -> list[MomentSequence]:
    if args.file:
        rows = _read_lines(args.file)
    elif args.sequences:
        rows = [tok for tok in args.sequences.split(";") if tok.strip()]
    else:
        raise DomainError("provide --sequences or --file")
    return [MomentSequence(tuple(_parse_floats(row))) for row in rows]


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")


def _emit_csv(header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{v:.17g}" for v in row))
    sys.stdout.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular evaluation grid over the parameter quadrant."""

    alpha_min: float
    alpha_max: float
    beta_min: float
    beta_max: float
    resolution: int
    spacing: str

    def __post_init__(self):
        if not (0.0 < self.alpha_min < self.alpha_max) or not (0.0 < self.beta_min < self.beta_max):
            raise DomainError("grid bounds must satisfy 0 < min < max on both axes")
        if not (2 <= self.resolution <= 2000):
            raise DomainError(f"resolution must lie in [2, 2000], got {self.resolution}")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        if self.spacing == "log":
            a = np.geomspace(self.alpha_min, self.alpha_max, self.resolution)
            b = np.geomspace(self.beta_min, self.beta_max, self.resolution)
        else:
            a = np.linspace(self.alpha_min, self.alpha_max, self.resolution)
            b = np.linspace(self.beta_min, self.beta_max, self.resolution)
        return a, b


def _cmd_metric(args) -> int:
    g = metric_tensor(_parse_point(args.point))
    _emit_json({"g_aa": g.g_aa, "g_ab": g.g_ab, "g_bb": g.g_bb})
    return 0


def _cmd_det(args) -> int:
    _emit_json({"det": det_metric(_parse_point(args.point))})
    return 0


def _cmd_det_bound(args) -> int:
    _emit_json({"bound": det_metric_lower_bound(_parse_point(args.point))})
    return 0


def _cmd_det_quad(args) -> int:
    p = _parse_point(args.point)
    _emit_json({"det": det_metric_quadrature(p, rel_tol=args.tol or 1e-8)})
    return 0


def _cmd_christoffel(args) -> int:
    c = christoffel(_parse_point(args.point))
    _emit_json({"a_ab": c.a_ab, "b_ab": c.b_ab, "c_ab": c.c_ab,
                "a_ba": c.a_ba, "b_ba": c.b_ba, "c_ba": c.c_ba, "d": c.d})
    return 0


def _cmd_curvature(args) -> int:
    _emit_json({"curvature": sectional_curvature(_parse_point(args.point))})
    return 0


def _cmd_curvature_grid(args) -> int:
    spec = GridSpec(alpha_min=args.alpha_min, alpha_max=args.alpha_max,
                    beta_min=args.beta_min, beta_max=args.beta_max,
                    resolution=args.resolution, spacing=args.spacing)
    a_ax, b_ax = spec.axes()
    rows = []
    for a in a_ax:
        ks = _curvature_values(np.full_like(b_ax, a), b_ax)
        for b, k in zip(b_ax, ks):
            rows.append((a, b, k))
    _emit_csv(["alpha", "beta", "curvature"], rows)
    return 0


def _cmd_geodesic(args) -> int:
    p = _parse_point(getattr(args, "from"))
    da, db = _parse_pair(args.velocity)
    path = exp_map(p, TangentVector(p, da, db), steps_hint=args.steps)
    rows = [(t, pt.alpha, pt.beta, v.d_alpha, v.d_beta)
            for t, pt, v in zip(path.times, path.points, path.velocities)]
    _emit_csv(["t", "alpha", "beta", "d_alpha", "d_beta"], rows)
    return 0


def _cmd_log(args) -> int:
    p = _parse_point(getattr(args, "from"))
    q = _parse_point(args.to)
    v = log_map(p, q)
    _emit_json({"d_alpha": v.d_alpha, "d_beta": v.d_beta})
    return 0


def _cmd_distance(args) -> int:
    p = _parse_point(getattr(args, "from"))
    q = _parse_point(args.to)
    _emit_json({"distance": distance(p, q)})
    return 0


def _ball_direction(center: BetaPoint, radius: float, theta: float,
                    frame) -> tuple[float, float, float]:
    u1, u2 = frame
    da = radius * (math.cos(theta) * u1[0] + math.sin(theta) * u2[0])
    db = radius * (math.cos(theta) * u1[1] + math.sin(theta) * u2[1])
    end = exp_map(center, TangentVector(center, da, db), steps_hint=1).end
    return theta, end.alpha, end.beta


def _orthonormal_frame(center: BetaPoint):
    g = metric_tensor(center)
    n1 = g.norm((1.0, 0.0))
    u1 = (1.0 / n1, 0.0)
    raw = (0.0, 1.0)
    proj = g.inner(u1, raw)
    w = (raw[0] - proj * u1[0], raw[1] - proj * u1[1])
    n2 = g.norm(w)
    return u1, (w[0] / n2, w[1] / n2)


def _cmd_ball(args) -> int:
    center = _parse_point(args.center)
    if not (math.isfinite(args.radius) and args.radius > 0.0):
        raise DomainError(f"radius must be > 0, got {args.radius!r}")
    if args.directions < 4:
        raise DomainError("need at least 4 directions")
    frame = _orthonormal_frame(center)
    thetas = [2.0 * math.pi * i / args.directions for i in range(args.directions)]
    if args.threads and args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(
                lambda th: _ball_direction(center, args.radius, th, frame), thetas))
    else:
        rows = [_ball_direction(center, args.radius, th, frame) for th in thetas]
    _emit_csv(["theta", "alpha", "beta"], rows)
    return 0


def _cmd_mean(args) -> int:
    pts = _points_argument(args)
    weights = _parse_floats(args.weights) if args.weights else None
    m = frechet_mean(pts, weights=weights, tol=args.tol or 1e-9)
    _emit_json({"alpha": m.alpha, "beta": m.beta})
    return 0


def _cmd_canonical(args) -> int:
    c = MomentSequence(tuple(_parse_floats(args.moments)))
    _emit_json({"p": list(to_canonical(c).values)})
    return 0


def _cmd_moments(args) -> int:
    p = CanonicalSequence(tuple(_parse_floats(args.canonical)))
    _emit_json({"c": list(from_canonical(p).values)})
    return 0


def _cmd_rho(args) -> int:
    c1 = MomentSequence(tuple(_parse_floats(args.moments_a)))
    c2 = MomentSequence(tuple(_parse_floats(args.moments_b)))
    _emit_json({"rho": rho_distance(c1, c2)})
    return 0


def _cmd_centroid(args) -> int:
    seqs = _sequences_argument(args)
    out = moment_centroid(seqs, tol=args.tol or 1e-8)
    _emit_json({"c": list(out.values)})
    return 0


def _cmd_clt_check(args) -> int:
    lam = args.ratio
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f"ratio must be > 0, got {lam!r}")
    scales = [int(s) for s in _parse_floats(args.scales)]
    if any(s < 1 for s in scales):
        raise DomainError("scales must be positive integers")
    limit = clt_limit_distance(args.alpha, args.alpha_prime)
    dists = []
    errs = []
    for n in scales:
        p = BetaPoint(n * args.alpha, n * lam * args.alpha)
        q = BetaPoint(n * args.alpha_prime, n * lam * args.alpha_prime)
        d = distance(p, q)
        dists.append(d)
        errs.append(abs(d - limit))
    _emit_json({"limit": limit, "scales": scales, "distances": dists,
                "errors": errs})
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="betageo",
                     description="Fisher-Rao geometry of the beta manifold "
                                 "and canonical moment coordinates")
    parser.add_argument("--seed", type=int, default=None,
                        help="random seed (accepted for interface stability; "
                             "current subcommands are deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    def point_cmd(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--point", required=True, help="point 'a,b'")
        sp.set_defaults(fn=fn)
        return sp

    point_cmd("metric", _cmd_metric, "metric tensor components at a point")
    point_cmd("det", _cmd_det, "metric determinant, closed form")
    point_cmd("det-bound", _cmd_det_bound, "elementary lower bound on the determinant")
    sp = point_cmd("det-quad", _cmd_det_quad, "metric determinant via double-integral quadrature")
    sp.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-8)")
    point_cmd("christoffel", _cmd_christoffel, "geodesic equation coefficients at a point")
    point_cmd("curvature", _cmd_curvature, "sectional curvature at a point")

    sp = sub.add_parser("curvature-grid", help="CSV of curvature over a grid")
    sp.add_argument("--alpha-min", type=float, required=True)
    sp.add_argument("--alpha-max", type=float, required=True)
    sp.add_argument("--beta-min", type=float, required=True)
    sp.add_argument("--beta-max", type=float, required=True)
    sp.add_argument("--resolution", type=int, default=50, help="points per axis")
    sp.add_argument("--spacing", choices=("linear", "log"), default="log")
    sp.set_defaults(fn=_cmd_curvature_grid)

    sp = sub.add_parser("geodesic", help="CSV of the geodesic from a point with a velocity")
    sp.add_argument("--from", required=True, help="start point 'a,b'")
    sp.add_argument("--velocity", required=True, help="initial velocity 'da,db'")
    sp.add_argument("--steps", type=int, default=100, help="number of sample intervals")
    sp.set_defaults(fn=_cmd_geodesic)

    sp = sub.add_parser("log", help="initial velocity of the geodesic joining two points")
    sp.add_argument("--from", required=True, help="start point 'a,b'")
    sp.add_argument("--to", required=True, help="end point 'a,b'")
    sp.set_defaults(fn=_cmd_log)

    sp = sub.add_parser("distance", help="geodesic distance between two points")
    sp.add_argument("--from", required=True, help="start point 'a,b'")
    sp.add_argument("--to", required=True, help="end point 'a,b'")
    sp.set_defaults(fn=_cmd_distance)

    sp = sub.add_parser("ball", help="CSV boundary of a geodesic ball")
    sp.add_argument("--center", required=True, help="center point 'a,b'")
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--directions", type=int, default=256)
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(fn=_cmd_ball)

    sp = sub.add_parser("mean", help="Frechet mean of a list of points")
    sp.add_argument("--points", default=None, help="semicolon-separated points 'a,b;a,b;...'")
    sp.add_argument("--file", default=None, help="file with one point 'a,b' per line")
    sp.add_argument("--weights", default=None, help="comma-separated weights")
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(fn=_cmd_mean)

    sp = sub.add_parser("canonical", help="canonical coordinates of a moment sequence")
    sp.add_argument("--moments", required=True, help="comma-separated moments")
    sp.set_defaults(fn=_cmd_canonical)

    sp = sub.add_parser("moments", help="moment sequence of canonical coordinates")
    sp.add_argument("--canonical", required=True, help="comma-separated coordinates in (0,1)")
    sp.set_defaults(fn=_cmd_moments)

    sp = sub.add_parser("rho", help="embedded dissimilarity between two moment sequences")
    sp.add_argument("--moments-a", required=True)
    sp.add_argument("--moments-b", required=True)
    sp.set_defaults(fn=_cmd_rho)

    sp = sub.add_parser("centroid", help="embedded centroid of several moment sequences")
    sp.add_argument("--sequences", default=None,
                    help="semicolon-separated sequences 'c1,c2;c1,c2;...'")
    sp.add_argument("--file", default=None, help="file with one sequence per line")
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(fn=_cmd_centroid)

    sp = sub.add_parser("clt-check", help="distances along a mean ray against the scaling limit")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--alpha-prime", type=float, required=True)
    sp.add_argument("--ratio", type=float, default=1.0, help="beta/alpha ratio of the ray")
    sp.add_argument("--scales", default="10,100,1000", help="comma-separated scale factors")
    sp.set_defaults(fn=_cmd_clt_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, BoundaryEscapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
