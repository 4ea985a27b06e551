"""Command-line surface: runs the estimators and verifiers, emits versioned
JSON (or CSV) reports, and exits nonzero when any embedded bound check fails.

Map specs: identity | affine:<mu> | radial:<K> | square | grid:<path> |
id3 | diag:<a,b,c>.  Regions: disk:<cx>,<cy>,<r> | rect:<x0>,<y0>,<x1>,<y1>.

Reports are reproducible: for a fixed config (including the seed) the
``payload`` subtree is byte-identical across runs; wall-clock timings live
outside it.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .constants import constant_chain, log_H_direct, verify_static_geometry
from .errors import MapSpecError, QcskewError
from .geometry import Disk
from .highdim import construct_b, diag_map, estimate_sigma_and_H_3d, identity_nd
from .lattice import build_tiling, locate_pq, verify_chain_inequality, verify_side_bound
from .linear import K_of_sigma, extremal_directions, kappa_at, linear_skew, mu_from_skew, oracle_max_ratio
from .maps import identity_map, load_grid_map, make_affine, make_radial_stretch, make_square_map
from .metrics import SamplingPlan, estimate_H, estimate_kf, estimate_skew_at, estimate_skew_sup, resolve_threads

SCHEMA_VERSION = "1"


def parse_map_spec(spec: str):
    """Planar map from a spec string (see module docstring)."""
    if spec == "identity":
        return identity_map()
    if spec == "square":
        return make_square_map()
    if spec.startswith("affine:"):
        try:
            return make_affine(float(spec.split(":", 1)[1]))
        except ValueError as exc:
            raise MapSpecError(f"bad affine spec {spec!r}: {exc}") from exc
    if spec.startswith("radial:"):
        try:
            return make_radial_stretch(float(spec.split(":", 1)[1]))
        except ValueError as exc:
            raise MapSpecError(f"bad radial spec {spec!r}: {exc}") from exc
    if spec.startswith("grid:"):
        path = spec.split(":", 1)[1]
        try:
            with open(path, "rb") as fh:
                return load_grid_map(fh)
        except OSError as exc:
            raise MapSpecError(f"cannot read grid map {path!r}: {exc}") from exc
    raise MapSpecError(f"unknown map spec {spec!r}")


def parse_space_map_spec(spec: str):
    if spec == "id3":
        return identity_nd(3)
    if spec.startswith("diag:"):
        try:
            return diag_map([float(x) for x in spec.split(":", 1)[1].split(",")])
        except ValueError as exc:
            raise MapSpecError(f"bad diag spec {spec!r}: {exc}") from exc
    raise MapSpecError(f"unknown space map spec {spec!r}")


def parse_region(spec: str) -> Disk:
    kind, _, rest = spec.partition(":")
    try:
        vals = [float(x) for x in rest.split(",")]
    except ValueError as exc:
        raise MapSpecError(f"bad region spec {spec!r}: {exc}") from exc
    if kind == "disk" and len(vals) == 3:
        return Disk(complex(vals[0], vals[1]), vals[2])
    raise MapSpecError(f"unknown region spec {spec!r} (expected disk:cx,cy,r)")


def parse_point(spec: str) -> complex:
    try:
        x, y = (float(v) for v in spec.split(","))
    except ValueError as exc:
        raise MapSpecError(f"bad point spec {spec!r} (expected x,y): {exc}") from exc
    return complex(x, y)


def plan_from_args(args) -> SamplingPlan:
    kwargs = {"seed": args.seed}
    if args.samples is not None:
        kwargs["triangle_count"] = args.samples
    if args.orientations is not None:
        kwargs["orientation_count"] = args.orientations
    if args.scales:
        kwargs["scale_ladder"] = tuple(float(s) for s in args.scales.split(","))
    if args.circle_samples is not None:
        kwargs["circle_samples"] = args.circle_samples
    return SamplingPlan(**kwargs)


def add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=None, help="triangle sample count")
    parser.add_argument("--orientations", type=int, default=None)
    parser.add_argument("--scales", default=None, help="comma-separated scale ladder r1,r2,...")
    parser.add_argument("--circle-samples", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker cap (default: QCSKEW_THREADS or all cores)")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def cmd_skew_scan(args):
    pm = parse_map_spec(args.map)
    plan = plan_from_args(args)
    config = {"map": args.map, "region": args.region, "at": args.at,
              "plan": plan.describe(), "threads": args.threads}
    if args.at:
        rep = estimate_skew_at(pm, parse_point(args.at), plan, threads=args.threads)
        results = {"skew_at": rep.to_dict()}
    else:
        rep = estimate_skew_sup(pm, parse_region(args.region), plan, threads=args.threads)
        results = {"skew_sup": rep.to_dict()}
    return config, results, []


def cmd_dilatation(args):
    pm = parse_map_spec(args.map)
    plan = plan_from_args(args)
    z = parse_point(args.at)
    config = {"map": args.map, "at": args.at, "plan": plan.describe(), "threads": args.threads}
    rep_h = estimate_H(pm, z, plan, threads=args.threads)
    rep_kf = estimate_kf(pm, z, plan, threads=args.threads)
    return config, {"H": rep_h.to_dict(), "kf": rep_kf.to_dict()}, []


def cmd_linear(args):
    given = [name for name in ("mu", "sigma", "tau") if getattr(args, name) is not None]
    if len(given) != 1:
        raise MapSpecError("give exactly one of --mu, --sigma, --tau")
    config = {"mu": args.mu, "sigma": args.sigma, "tau": args.tau, "oracle_grid": args.oracle_grid}
    results = {}
    if args.mu is not None:
        mu = args.mu
        tau = linear_skew(mu)
        results["tau"] = tau
        results["K"] = (1.0 + mu) / (1.0 - mu)
        if 0.0 < mu < 1.0:
            zmax, zmin = extremal_directions(mu)
            results["extremal_directions"] = {
                "maximizer": [zmax.real, zmax.imag],
                "minimizer": [zmin.real, zmin.imag],
                "kappa_max": kappa_at(mu, zmax),
                "kappa_min": kappa_at(mu, zmin),
            }
            oracle = oracle_max_ratio(mu, args.oracle_grid)
            results["oracle"] = {"grid": args.oracle_grid, "value": oracle,
                                 "rel_delta": abs(oracle - tau) / tau}
    elif args.sigma is not None:
        results["K"] = K_of_sigma(args.sigma)
    else:
        mu = mu_from_skew(args.tau)
        results["mu"] = mu
        results["roundtrip_tau"] = linear_skew(mu)
    return config, results, []


def cmd_lattice(args):
    config = {"k": args.k, "map": args.map, "pairs": args.pairs, "check_pq": args.check_pq,
              "sigma_hat": args.sigma_hat, "eps_tol": args.eps_tol, "seed": args.seed}
    tiling = build_tiling(args.k)
    results = {"tiling": {"k": args.k, "triangles": tiling.triangle_count,
                          "edges": tiling.edge_count,
                          "boundary_edges": tiling.boundary_edge_counts()}}
    bounds = []
    if args.check_pq:
        if args.k != 9:
            raise MapSpecError("--check-pq requires --k 9")
        p, q = locate_pq(9, tiling)
        results["pq"] = {
            "p": {"m": p.m, "n": p.n, "k": p.k, "value": [p.value().real, p.value().imag]},
            "q": {"m": q.m, "n": q.n, "k": q.k, "value": [q.value().real, q.value().imag]},
            "exact_assertions": "passed",
        }
    else:
        pm = parse_map_spec(args.map)
        chain = verify_chain_inequality(pm, args.k, sigma_hat=args.sigma_hat, pairs=args.pairs,
                                        seed=args.seed, eps_tol=args.eps_tol, tiling=tiling)
        side = verify_side_bound(pm, args.k, tiling=tiling)
        results["chain"] = chain.to_dict()
        results["side"] = side.to_dict()
        bounds = [chain, side]
    return config, results, bounds


def cmd_constants(args):
    config = {"sigma": args.sigma, "N": args.N, "verify_geometry": args.verify_geometry}
    chain = constant_chain(args.sigma, args.N)
    results = {"chain": chain.to_dict(),
               "log_H_crosscheck": {"direct": log_H_direct(args.sigma, args.N),
                                    "chained": chain.log_H}}
    bounds = []
    if args.verify_geometry:
        geo = verify_static_geometry()
        results["geometry"] = geo.to_dict()
        bounds.append(geo)
    return config, results, bounds


def cmd_highdim(args):
    config = {"map": args.map, "center": args.center, "a": args.a,
              "construct_b": args.construct_b, "eps_tol": args.eps_tol}
    if args.construct_b:
        if not args.a:
            raise MapSpecError("--construct-b requires --a a1,a2")
        a1, a2 = (float(v) for v in args.a.split(","))
        b = construct_b(a1, a2)
        return config, {"b": list(b)}, []
    sm = parse_space_map_spec(args.map)
    plan = plan_from_args(args)
    config["plan"] = plan.describe()
    center = np.zeros(sm.dim)
    if args.center:
        center = np.array([float(v) for v in args.center.split(",")])
    rep = estimate_sigma_and_H_3d(sm, center, plan, eps_tol=args.eps_tol)
    return config, {"bound": rep.to_dict()}, [rep]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcskew", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"qcskew {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("skew-scan", help="image-skew supremum over a region, or the local profile at a point")
    p.add_argument("--map", required=True)
    p.add_argument("--region", default="disk:0,0,1")
    p.add_argument("--at", default=None, help="probe point x,y (switches to the local estimator)")
    add_common(p)
    p.set_defaults(func=cmd_skew_scan)

    p = sub.add_parser("dilatation", help="circle distortion H and the diameter-to-area ratio at a point")
    p.add_argument("--map", required=True)
    p.add_argument("--at", default="0,0")
    add_common(p)
    p.set_defaults(func=cmd_dilatation)

    p = sub.add_parser("linear", help="closed forms for the normalized linear map")
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--oracle-grid", type=int, default=10**6)
    add_common(p)
    p.set_defaults(func=cmd_linear)

    p = sub.add_parser("lattice", help="tiling enumeration, chain and side bounds, exact p/q checks")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--map", default="identity")
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--check-pq", action="store_true")
    p.add_argument("--sigma-hat", type=float, default=None)
    p.add_argument("--eps-tol", type=float, default=0.01)
    add_common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("constants", help="the explicit constant chain and the static geometry checks")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--N", type=int, default=2**18)
    p.add_argument("--verify-geometry", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("highdim", help="dimension >= 3: apex construction and the cubed-skew bound")
    p.add_argument("--map", default="id3")
    p.add_argument("--center", default=None)
    p.add_argument("--a", default=None)
    p.add_argument("--construct-b", action="store_true")
    p.add_argument("--eps-tol", type=float, default=0.02)
    add_common(p)
    p.set_defaults(func=cmd_highdim)

    return parser


def render_csv(results: dict) -> str:
    """Flat projection of the per-scale tables."""
    lines = ["section,scale,value"]
    def walk(prefix, node):
        if isinstance(node, dict):
            if "per_scale" in node:
                for r, v in node["per_scale"]:
                    lines.append(f"{prefix},{r!r},{v!r}")
            if "extras" in node and isinstance(node["extras"], dict) and "per_scale_H" in node["extras"]:
                for r, v in node["extras"]["per_scale_H"]:
                    lines.append(f"{prefix},{r!r},{v!r}")
            for key, val in node.items():
                if key not in ("per_scale",):
                    walk(f"{prefix}.{key}" if prefix else key, val)
    walk("", results)
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        config, results, bound_reports = args.func(args)
    except QcskewError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    elapsed_ms = 1000.0 * (time.perf_counter() - t0)

    config.setdefault("threads_resolved", resolve_threads(getattr(args, "threads", None)))
    failures = [f"{rep.title}: {name}" for rep in bound_reports for name in rep.failures]
    passed = not failures
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "qcskew", "version": __version__},
        "command": args.command,
        "payload": {"config": config, "results": results},
        "passed": passed,
        "failures": failures,
        "timings_ms": {"total": elapsed_ms},
    }
    if args.format == "csv":
        text = render_csv(results)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
