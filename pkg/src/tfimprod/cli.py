"""Command-line front end.

Subcommands: solve, round, exact, constants, curve, triangle, bench.
Reports go to stdout (JSON, or CSV where noted) with floats printed at 12
significant digits; diagnostics go to stderr.  Exit codes: 0 success,
1 usage error, 2 parse/validation error, 3 solver failure, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import constants, exact, relax, rounding
from .instance import InstanceError, load_instance, random_instance, triangle_instance

_EXIT_USAGE = 1
_EXIT_INVALID = 2
_EXIT_SOLVER = 3
_EXIT_VERIFY = 4


def _fmt(value):
    """Recursively round floats to 12 significant digits for stable output."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, (np.floating,)):
        return float(f"{float(value):.12g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_fmt(v) for v in value]
    return value


def _emit(doc):
    sys.stdout.write(json.dumps(_fmt(doc), indent=2) + "\n")


def _instance_summary(inst):
    from .instance import is_frustrated

    return {
        "n": inst.n,
        "m": inst.m,
        "W": inst.W,
        "H": inst.H,
        "frustrated": is_frustrated(inst),
    }


def _shift_identity(inst, lmax, cap):
    direct, _ = exact.lambda_min(exact.build_tfim_hamiltonian(inst, cap=cap))
    shifted = inst.W + inst.H - 2.0 * lmax
    return {
        "lambda_min_direct": direct,
        "w_plus_h_minus_2_lambda_max": shifted,
        "residual": direct - shifted,
    }


def _cmd_solve(args):
    inst = load_instance(args.path)
    sol = relax.solve_soc_sdp(inst, tol=args.tol)
    doc = {"instance": _instance_summary(inst)}
    doc.update(sol.to_dict())
    _emit(doc)
    return 0


def _cmd_exact(args):
    inst = load_instance(args.path)
    hd = exact.build_hamiltonian(inst, cap=args.cap)
    spec = exact.spectrum(hd)
    lmax = float(spec[-1])
    state = exact.optimize_product_state(inst, restarts=args.restarts, seed=args.seed)
    prod_opt, _, _ = exact.evaluate_product_state(inst, state)
    _emit({
        "instance": _instance_summary(inst),
        "spectrum": spec.tolist(),
        "lambda_max": lmax,
        "prod_opt": prod_opt,
        "prod_state": state.vectors.tolist(),
        "prod_opt_vs_exact": prod_opt / lmax if lmax > 0 else None,
        "shift_identity": _shift_identity(inst, lmax, args.cap),
    })
    return 0


_ROUND_CHOICES = ("A", "B", "C", "warmup", "best")


def _algo_tags(choice, q):
    if choice == "A":
        return [("AlgA", None)]
    if choice == "B":
        return [("AlgB", None)]
    if choice == "C":
        return [("AlgC", q)]
    if choice == "warmup":
        return [("FieldOnly", None), ("IsingGW", None)]
    return [("FieldOnly", None), ("IsingGW", None), ("AlgA", None), ("AlgB", None), ("AlgC", q)]


def _cmd_round(args):
    inst = load_instance(args.path)
    q = args.q if args.q is not None else constants.q_star()
    sdp = relax.solve_soc_sdp(inst, tol=args.tol)

    exact_opt = None
    prod_opt = None
    shift = None
    if inst.n <= args.cap:
        lmax, _ = exact.lambda_max(exact.build_hamiltonian(inst, cap=args.cap))
        exact_opt = lmax
        state = exact.optimize_product_state(inst, restarts=args.restarts, seed=args.seed)
        prod_opt, _, _ = exact.evaluate_product_state(inst, state)
        shift = _shift_identity(inst, lmax, args.cap)

    tags = _algo_tags(args.algo, q)
    ising_sdp = None
    if any(tag == "IsingGW" for tag, _ in tags):
        ising_sdp = relax.solve_soc_sdp(rounding.field_free(inst), tol=args.tol)

    algo_stats = {}
    candidates = []
    for tag, tag_q in tags:
        stats = rounding.run_trials(
            inst,
            ising_sdp if tag == "IsingGW" else sdp,
            tag,
            q=tag_q,
            trials=args.trials,
            seed=args.seed,
        )
        algo_stats[tag] = {
            "q": tag_q,
            "best": stats.best.value,
            "mean": stats.mean,
            "stderr": stats.stderr,
            "trials": args.trials,
        }
        candidates.append(stats.best)
    winner = rounding.best_of(inst, candidates)

    ratios = {"best_vs_sdp": winner.value / sdp.objective if sdp.objective > 0 else None}
    if exact_opt is not None:
        ratios["best_vs_exact"] = winner.value / exact_opt if exact_opt > 0 else None
        ratios["prod_opt_vs_exact"] = prod_opt / exact_opt if exact_opt > 0 else None

    _emit({
        "instance": _instance_summary(inst),
        "tol": args.tol,
        "trials": args.trials,
        "seed": args.seed,
        "sdp_value": sdp.objective,
        "sdp_e": sdp.edge_total,
        "sdp_x": sdp.field_total,
        "exact_opt": exact_opt,
        "prod_opt": prod_opt,
        "algorithms": algo_stats,
        "best": {"algo": winner.algo, "q": winner.q, "trial": winner.trial, "value": winner.value},
        "ratios": ratios,
        "shift_identity": shift,
    })
    return 0


def _cmd_constants(_args):
    _emit(constants.constants_summary())
    return 0


def _cmd_curve(args):
    points = constants.q_opt_curve(args.points)
    if args.format == "json":
        _emit([{"p": pt.p, "q_opt": pt.q_opt, "ratio": pt.ratio} for pt in points])
    else:
        lines = ["p,q_opt,ratio"]
        lines += [f"{pt.p:.12g},{pt.q_opt:.12g},{pt.ratio:.12g}" for pt in points]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_triangle(args):
    inst = triangle_instance()
    checks = []

    def check(name, actual, expected, tol):
        ok = bool(abs(actual - expected) <= tol)
        checks.append({
            "name": name,
            "actual": actual,
            "expected": expected,
            "tol": tol,
            "pass": ok,
        })
        return ok

    hd = exact.build_hamiltonian(inst)
    spec = exact.spectrum(hd)
    expected_spec = np.sort(np.array([
        18 / 5, 16 / 5, 16 / 5, 13 / 5, 13 / 5,
        (8 + math.sqrt(19)) / 5, (8 - math.sqrt(19)) / 5, 4 / 5,
    ]))
    check("spectrum_max_abs_diff", float(np.max(np.abs(spec - expected_spec))), 0.0, 1e-9)
    lmax = float(spec[-1])
    check("lambda_max", lmax, 18 / 5, 1e-9)

    state = exact.optimize_product_state(inst, restarts=max(args.restarts, 100), seed=args.seed)
    prod_opt, _, _ = exact.evaluate_product_state(inst, state)
    check("prod_opt", prod_opt, 169 / 50, 1e-6)
    check("prod_opt_vs_exact", prod_opt / lmax, 169 / 180, 1e-6)

    matching = exact.BlochAssignment.from_xz([1.0, 0.6, 0.6], [0.0, 0.8, -0.8])
    match_val, _, _ = exact.evaluate_product_state(inst, matching)
    check("matching_state_value", match_val, 169 / 50, 1e-9)

    plus_val, _, _ = exact.evaluate_product_state(inst, exact.BlochAssignment.plus_states(3))
    check("all_plus_stationary_value", plus_val, 33 / 10, 1e-9)

    shift = _shift_identity(inst, lmax, exact.DEFAULT_CAP)
    check("shift_identity_residual", shift["residual"], 0.0, 1e-9)

    sdp = relax.solve_soc_sdp(inst, tol=args.tol)
    check("sdp_upper_bounds_lambda_max", min(sdp.objective + args.tol * (inst.W + inst.H) - lmax, 0.0), 0.0, 0.0)

    ising_sdp = relax.solve_soc_sdp(rounding.field_free(inst), tol=args.tol)
    roundings = {}
    for tag, tag_q in _algo_tags("best", constants.q_star()):
        stats = rounding.run_trials(
            inst,
            ising_sdp if tag == "IsingGW" else sdp,
            tag,
            q=tag_q,
            trials=args.trials,
            seed=args.seed,
        )
        roundings[tag] = {"best": stats.best.value, "mean": stats.mean, "stderr": stats.stderr}

    ok = all(c["pass"] for c in checks)
    _emit({
        "instance": _instance_summary(inst),
        "pass": ok,
        "checks": checks,
        "sdp_value": sdp.objective,
        "roundings": roundings,
    })
    if not ok:
        failed = [c["name"] for c in checks if not c["pass"]]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return _EXIT_VERIFY
    return 0


def _cmd_bench(args):
    rows = []
    q = constants.q_star()
    for k in range(args.count):
        inst = random_instance(args.n, args.p, seed=args.seed + k, h_max=args.h_max)
        sdp = relax.solve_soc_sdp(inst, tol=args.tol)
        ising_sdp = relax.solve_soc_sdp(rounding.field_free(inst), tol=args.tol)
        candidates = []
        for tag, tag_q in _algo_tags("best", q):
            stats = rounding.run_trials(
                inst,
                ising_sdp if tag == "IsingGW" else sdp,
                tag,
                q=tag_q,
                trials=args.trials,
                seed=args.seed + k,
            )
            candidates.append(stats.best)
        winner = rounding.best_of(inst, candidates)
        lmax = ""
        ratio_exact = ""
        if inst.n <= args.cap:
            val, _ = exact.lambda_max(exact.build_hamiltonian(inst, cap=args.cap))
            lmax = f"{val:.12g}"
            ratio_exact = f"{winner.value / val:.12g}" if val > 0 else ""
        rows.append(",".join([
            str(k), str(inst.n), str(inst.m),
            f"{inst.W:.12g}", f"{inst.H:.12g}",
            f"{sdp.objective:.12g}", f"{sdp.edge_total:.12g}", f"{sdp.field_total:.12g}",
            winner.algo, f"{winner.value:.12g}",
            f"{winner.value / sdp.objective:.12g}" if sdp.objective > 0 else "",
            lmax, ratio_exact,
        ]))
    header = "idx,n,m,W,H,sdp,sdp_e,sdp_x,best_algo,best_value,ratio_vs_sdp,lambda_max,ratio_vs_exact"
    sys.stdout.write("\n".join([header] + rows) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfimprod",
        description="Certified product-state approximations for signed transverse-field Ising models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, path=True):
        if path:
            p.add_argument("path", help="instance JSON file")
        p.add_argument("--tol", type=float, default=relax.DEFAULT_TOL)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="solve the relaxation")
    common(p)
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("round", help="solve, round, and report ratios")
    common(p)
    p.add_argument("--algo", choices=_ROUND_CHOICES, default="best")
    p.add_argument("--q", type=float, default=None, help="scaling for AlgC (default q*)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--cap", type=int, default=exact.DEFAULT_CAP)
    p.add_argument("--restarts", type=int, default=128)
    p.set_defaults(handler=_cmd_round)

    p = sub.add_parser("exact", help="dense spectrum and best product state")
    p.add_argument("path")
    p.add_argument("--cap", type=int, default=exact.DEFAULT_CAP)
    p.add_argument("--restarts", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_exact)

    p = sub.add_parser("constants", help="headline approximation constants")
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("curve", help="optimal q and guarantee versus edge share p")
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(handler=_cmd_curve)

    p = sub.add_parser("triangle", help="verify the 3-qubit gap instance end to end")
    p.add_argument("--tol", type=float, default=relax.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=128)
    p.set_defaults(handler=_cmd_triangle)

    p = sub.add_parser("bench", help="random-ensemble sweep to CSV")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--h-max", type=float, default=1.0, dest="h_max")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--tol", type=float, default=relax.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=exact.DEFAULT_CAP)
    p.set_defaults(handler=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else _EXIT_USAGE
    try:
        return args.handler(args)
    except (InstanceError, exact.CapExceeded, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INVALID
    except relax.SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return _EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
