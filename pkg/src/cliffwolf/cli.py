"""Command-line front end.

Exit codes: 0 success / affirmative, 1 negative verdict (a COUNTEREXAMPLE,
or a failed ``--expect-*`` check), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

import numpy as np

from . import liegroup, randers, strata
from .exactlin import format_scalar, parse_vector
from .pipelines import ConcordanceError, certify_point, coordinate_ad, haar_samples
from .rootsys import LieType, build_root_system, weyl_orbit

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", action="store_true", default=default if suppress else False,
                        help="emit machine-readable JSON")
    parser.add_argument("--seed", type=int, default=default if suppress else 0)
    parser.add_argument("--tol", type=float, default=default)
    parser.add_argument("--samples", type=int, default=default)


def _type_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--type", required=True, help="A, D or E6")
    parser.add_argument("--rank", type=int)
    parser.add_argument("--frame", choices=("listed", "a5a1"), default=None,
                        help="E6 coordinate frame")


def _lie_type(args) -> LieType:
    try:
        return LieType.parse(args.type, args.rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _point(text: str):
    try:
        return parse_vector(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point {text!r}: {exc}") from exc


def _floats(text: str) -> np.ndarray:
    try:
        return np.array([float(Fraction(p)) for p in text.split(",") if p.strip()])
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}") from exc


def _emit(args, payload: dict, lines: list) -> None:
    payload.setdefault("seed", args.seed)
    payload.setdefault("tol", args.tol)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines + [f"seed {payload['seed']} tol {payload['tol']}"]))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_orbit(args) -> int:
    t = _lie_type(args)
    rs = build_root_system(t, args.frame)
    try:
        orbit = weyl_orbit(rs, _point(args.point))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {"type": str(t), "frame": rs.frame, "size": len(orbit), "seed": args.seed,
               "tol": args.tol}
    lines = [f"{t} orbit size: {len(orbit)}"]
    if args.list:
        pts = [[format_scalar(e) for e in p] for p in orbit.points]
        payload["points"] = pts
        lines += ["(" + ", ".join(p) + ")" for p in pts]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_certify(args) -> int:
    t = _lie_type(args)
    rs = build_root_system(t, args.frame)
    try:
        result = certify_point(rs, _point(args.point))
    except ConcordanceError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = result.to_json()
    payload.update({"type": str(t), "seed": args.seed, "tol": args.tol})
    lines = [f"{t} orbit size {result.orbit_size}"]
    for name, cert in result.certificates.items():
        lines.append(f"  {name:16s} {cert.verdict.value}")
    lines.append(f"verdict: {result.verdict.value}")
    _emit(args, payload, lines)
    if result.verdict.value == "CERTIFIED_CENTERED":
        return EXIT_OK
    if result.verdict.value == "COUNTEREXAMPLE":
        return EXIT_NEGATIVE
    return EXIT_USAGE


def cmd_strata(args) -> int:
    t = _lie_type(args)
    if t.family == "E6":
        raise UsageError("no closed-form strata table for E6; use the probe subcommand")
    rows = strata.enumerate_strata(t)
    min_ng = strata.min_nongeneric_codim(t)
    ok = min_ng is None or min_ng >= t.rank + 1
    payload = {"type": str(t), "rows": [r.to_json() for r in rows],
               "min_nongeneric_codim": min_ng, "rank_plus_one": t.rank + 1,
               "bound_holds": ok, "seed": args.seed, "tol": args.tol}
    lines = [f"{'n0':>3} {'parts':<20} {'codim':>6} generic"]
    for r in rows:
        parts = "{" + ",".join(map(str, r.mtype.parts)) + "}"
        lines.append(f"{r.mtype.n0:>3} {parts:<20} {r.codim:>6} {r.generic}")
    lines.append(f"min non-generic codim {min_ng} vs rank+1 = {t.rank + 1}: "
                 f"{'holds' if ok else 'FAILS'}")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_probe(args) -> int:
    rs = build_root_system(LieType("E6", 6), args.frame or "a5a1")
    trials = args.samples or 20
    report = strata.e6_generic_probe(rs, trials, args.seed)
    lines = [f"E6 genericity probe ({rs.frame} frame, {trials} trials/type, seed {args.seed})"]
    for k, v in report["types"].items():
        lines.append(f"  {k:8s} failure fraction {v['failure_fraction']:.3f}")
    _emit(args, report, lines)
    return EXIT_OK


def _load_randers(path: str) -> randers.RandersData:
    try:
        with open(path) as fh:
            return randers.RandersData.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load Randers data from {path}: {exc}") from exc


def cmd_killing(args) -> int:
    count = args.samples if args.samples is not None else 200
    if count <= 0:
        raise UsageError("--samples must be positive")
    tol = args.tol if args.tol is not None else 1e-9
    d = _load_randers(args.data)
    family, n = args.group, args.n
    dim = len(liegroup.algebra_basis(family, n))
    if d.n != dim:
        raise UsageError(f"Randers data has dimension {d.n}, {family}({n}) has {dim}")
    X = _floats(args.x) if args.x else None
    if args.match_center:
        sphere = randers.is_round_sphere(d)
        if sphere is None:
            raise UsageError("--match-center needs round-sphere data")
        center = np.array(sphere.center, dtype=float)
        if X is None:
            X = np.random.default_rng(args.seed).standard_normal(dim)
        X = X / np.sqrt(X @ np.array(d.B, float) @ X) * float(sphere.radius)
        Xp = -center
    else:
        if X is None:
            raise UsageError("--x is required unless --match-center is given")
        Xp = _floats(args.xprime) if args.xprime else np.zeros(dim)
    if len(X) != dim or len(Xp) != dim:
        raise UsageError(f"X and X' need {dim} coordinates")
    samples = haar_samples(family, n, count, args.seed)
    try:
        rep = randers.constant_length_test(d, X, Xp, samples, coordinate_ad(family, n))
    except randers.RandersError as exc:
        raise UsageError(f"{exc.code}: {exc}") from exc
    payload = rep.to_json()
    payload.update({"seed": args.seed, "tol": tol, "X": X.tolist(), "X_prime": Xp.tolist()})
    constant = rep.variation <= tol
    payload["constant"] = constant
    _emit(args, payload, [
        f"F(Ad(g)X - X') over {rep.samples} samples: min {rep.min:.12g} max {rep.max:.12g}",
        f"variation {rep.variation:.3e} ({'constant' if constant else 'not constant'} at tol {tol:g})",
    ])
    if args.expect_constant and not constant:
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_lemgeo(args) -> int:
    if args.t0 is None:
        raise UsageError("--t0 is required")
    family, n = args.group, args.n
    tol = args.tol if args.tol is not None else 1e-10
    try:
        X = liegroup.from_coords(family, n, _floats(args.x))
        X = X * (1.0 / X.norm())
        if args.v:
            V = liegroup.from_coords(family, n, _floats(args.v))
        else:
            V = liegroup.AlgebraElement(family, np.zeros((n, n)))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        res = liegroup.lemgeo_solve(X, args.t0, V, tol=tol, max_iter=args.max_iter)
    except liegroup.NotApplicableError as exc:
        payload = {"status": "NOT_APPLICABLE", "reason": str(exc), "seed": args.seed, "tol": tol}
        _emit(args, payload, [f"NOT_APPLICABLE: {exc}"])
        return EXIT_NEGATIVE
    except liegroup.LogBranchError as exc:
        payload = {"status": "LOG_BRANCH", "reason": str(exc), "seed": args.seed, "tol": tol}
        _emit(args, payload, [f"LOG_BRANCH: {exc}"])
        return EXIT_NEGATIVE
    except liegroup.NoConvergenceError as exc:
        payload = {"status": "NO_CONVERGENCE", "reason": str(exc), "seed": args.seed, "tol": tol}
        _emit(args, payload, [f"NO_CONVERGENCE: {exc}"])
        return EXIT_NEGATIVE
    payload = {"status": "CONVERGED", **res.to_json(), "seed": args.seed, "tol": tol,
               "v_norm": V.norm(),
               "X_prime_coords": liegroup.to_coords(res.X_prime).tolist()}
    _emit(args, payload, [
        f"t' = {res.t_prime:.12g} (t0 = {args.t0:.12g}) after {res.iterations} iterations",
        f"residual {res.residual:.3e}, max contraction ratio {res.max_ratio:.4f} (|V| = {V.norm():.4f})",
    ])
    return EXIT_OK


def _random_w(rng: random.Random, dim: int) -> list:
    while True:
        w = [Fraction(rng.randint(-20, 20), rng.randint(1, 20) * dim) for _ in range(dim)]
        if sum(e * e for e in w) < 1:
            return w


def cmd_roundness(args) -> int:
    if args.data:
        d = _load_randers(args.data)
        sphere = randers.is_round_sphere(d)
        payload = {"round": sphere is not None, "seed": args.seed, "tol": args.tol}
        if sphere is not None:
            conv = str if d.exact else float
            payload["center"] = [conv(e) for e in sphere.center]
            payload["radius_sq"] = conv(sphere.radius_sq)
        _emit(args, payload, [f"round sphere: {payload}"])
        return EXIT_OK if sphere is not None else EXIT_NEGATIVE

    trips = []
    if args.W:
        trips.append([Fraction(p) for p in args.W.split(",")])
    else:
        rng = random.Random(args.seed)
        trips = [_random_w(rng, args.dim) for _ in range(args.samples or 100)]
    failures = 0
    for W in trips:
        B = np.eye(len(W), dtype=int).astype(object)
        try:
            d = randers.navigation_to_randers(B, W)
        except randers.RandersError as exc:
            raise UsageError(f"{exc.code}: {exc}") from exc
        s = randers.is_round_sphere(d)
        ok = s is not None and list(s.center) == list(W) and s.radius_sq == 1
        failures += not ok
    payload = {"round_trips": len(trips), "failures": failures, "seed": args.seed, "tol": args.tol}
    if args.W:
        payload["randers"] = d.to_json()
    _emit(args, payload, [f"navigation round trips: {len(trips)}, failures: {failures}"])
    return EXIT_OK if failures == 0 else EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)
    parser = _Parser(prog="cliffwolf", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("orbit", parents=[common], help="enumerate a Weyl orbit")
    _type_options(p)
    p.add_argument("--point", required=True)
    p.add_argument("--list", action="store_true", help="print every orbit point")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("certify", parents=[common], help="center certificates for an orbit")
    _type_options(p)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("strata", parents=[common], help="multiplicity strata table")
    _type_options(p)
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("probe", parents=[common], help="E6 degenerate-type genericity probe")
    p.add_argument("--frame", choices=("listed", "a5a1"), default="a5a1")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("killing", parents=[common], help="constant-length Killing field test")
    p.add_argument("--group", choices=liegroup.FAMILIES, default="su")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--data", required=True, help="RandersData JSON file")
    p.add_argument("--x", help="X in orthonormal algebra coordinates")
    p.add_argument("--xprime", help="X' in orthonormal algebra coordinates")
    p.add_argument("--match-center", action="store_true",
                   help="use X' = -center and scale X to the sphere radius")
    p.add_argument("--expect-constant", action="store_true")
    p.set_defaults(func=cmd_killing)

    p = sub.add_parser("lemgeo", parents=[common], help="geodesic fixed-point solver")
    p.add_argument("--group", choices=liegroup.FAMILIES, default="su")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--x", required=True, help="direction X (normalized to unit length)")
    p.add_argument("--v", help="drift V")
    p.add_argument("--t0", type=float)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_lemgeo)

    p = sub.add_parser("roundness", parents=[common], help="round-sphere decision / navigation")
    p.add_argument("--data", help="RandersData JSON file to test")
    p.add_argument("--W", help="navigation field (exact, comma separated), B = identity")
    p.add_argument("--dim", type=int, default=3, help="dimension for random round trips")
    p.set_defaults(func=cmd_roundness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
