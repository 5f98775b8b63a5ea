"""Command-line driver: kernel tables, Monte Carlo runs, macroscopic maps,
convergence experiments and identity verification.

Every command writes CSV with a header row, %.17g numeric formatting, UTF-8
encoding and plain "\\n" newlines, so a fixed seed and fixed tolerances give
byte-identical files across runs.  A JSON config file (--config run.json,
top-level field schema: 1) may replace flags; explicitly passed flags win.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.

Argument tuples for `kernel` and `converge` are comma-separated quadruples
in CSV column order (x1, m1_or_mu1, x2, m2_or_mu2).  The finite family takes
lattice arguments in doubled-position encoding (x2 = 2x, so x2 + m + 1 must
be even); the scaling families take their window coordinates directly.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from tacnode_lab.finite_kernel import (
    GridPoint,
    ModelParams,
    kernel_finite,
    recurrence_residuals,
)
from tacnode_lab.limits import (
    GUEPoint,
    PearceyPoint,
    kernel_gue_limit,
    kernel_gue_minor,
    kernel_pearcey,
    scaled_finite_for_tacnode,
    scaled_tacnode_for_gue,
    scaled_tacnode_for_pearcey,
)
from tacnode_lab.macro import MacroPoint, boundary_curve, saddle
from tacnode_lab.simulate import (
    EndpointTarget,
    PairTarget,
    SimConfig,
    estimate_occupancy,
    estimate_pair_and_endpoints,
    run_trials,
)
from tacnode_lab.tacnode import TacnodeParams, TacnodePoint, kernel_tacnode

__all__ = ["main"]

KERNEL_FAMILIES = ("finite", "tacnode", "gue", "gue-minor", "pearcey")

# default argument tuples per convergence target, column order
# (x1, mu1, x2, mu2); nearby-sections uses (x1, da, x2, db) with da, db the
# section offsets in {0, 2}
DEFAULT_TUPLES = {
    "tacnode": (
        (0, 0.0, 0, 0.0),
        (1, 0.1875, 0, 0.5),
        (-2, -0.375, 1, 0.3125),
        (2, 0.625, -1, -0.1875),
        (0, 0.25, 1, 0.0625),
    ),
    "gue:nonnegative": (
        (0, 0.35, 0, 0.1),
        (1, 0.2, 0, -0.3),
        (2, 0.4, 1, 0.1),
        (0, -0.3, 1, 0.25),
        (1, 0.0, 2, -0.2),
    ),
    "gue:negative": (
        (-1, 0.1, -1, -0.15),
        (-1, 0.2, -2, -0.3),
        (-2, 0.4, -1, 0.1),
        (-1, -0.3, -3, 0.25),
        (-2, 0.0, -1, -0.2),
    ),
    "pearcey": (
        (0.0, 0.0, 0.0, 0.0),
        (0.0, 0.2, 0.0, -0.1),
        (0.0, 0.5, 0.0, 0.3),
        (0.0, -0.2, 0.0, 0.4),
        (0.0, 0.1, 0.0, 0.6),
    ),
    "nearby-sections": (
        (0, 0, 0, 2),
        (0, 2, 0, 0),
        (0, 2, 1, 0),
        (0, 0, 1, 2),
    ),
}

VERIFY_POINTS = (
    (GridPoint(1, 0), GridPoint(1, 0)),
    (GridPoint(2, 1), GridPoint(2, 1)),
    (GridPoint(1, 0), GridPoint(3, 2)),
    (GridPoint(3, -2), GridPoint(2, -1)),
    (GridPoint(4, 1), GridPoint(2, 1)),
)

SYMMETRY_TUPLES = (
    (0, 0.2, 0, 0.2),
    (0, 0.3, 1, -0.2),
    (1, 0.5, -1, 0.1),
    (2, -0.4, 0, 0.25),
)

RECURRENCE_ARGS = (
    (0.0, 0.0, 1, 5),
    (0.0, 0.0, 3, 5),
    (1.0, 0.0, 3, 5),
    (0.0, 1.0, 3, 5),
)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _parse_quads(items: list[str], parser) -> list[tuple[float, ...]]:
    quads = []
    for item in items:
        parts = item.split(",")
        if len(parts) != 4:
            parser.error(f"argument tuple '{item}' is not a quadruple")
        try:
            quads.append(tuple(float(p) for p in parts))
        except ValueError:
            parser.error(f"argument tuple '{item}' is not numeric")
    return quads


def _require(args, parser, *names) -> None:
    for name in names:
        if getattr(args, name) is None:
            parser.error(f"--{name.replace('_', '-')} is required here")


# ---------------------------------------------------------------- kernel

def _kernel_row(family: str, quad, args):
    x1, a1, x2, a2 = quad
    tol = args.tol
    if family == "finite":
        p1 = GridPoint(int(a1), int(x1))
        p2 = GridPoint(int(a2), int(x2))
        params = ModelParams(eps_rate=args.eps, t=args.t)
        kv = kernel_finite(p1, p2, params, scheme=args.scheme, tol=tol)
        return [family, int(x1), int(a1), int(x2), int(a2),
                kv.value.real, kv.value.imag, kv.err]
    if family == "tacnode":
        params = TacnodeParams(eps_tac=args.eps_tac, tol=tol)
        kv = kernel_tacnode(TacnodePoint(int(x1), a1),
                            TacnodePoint(int(x2), a2), params)
        return [family, int(x1), a1, int(x2), a2,
                kv.value.real, kv.value.imag, kv.err]
    if family == "gue":
        kv = kernel_gue_limit(GUEPoint(int(x1), a1), GUEPoint(int(x2), a2),
                              branch=args.branch, tol=tol)
        return [family, int(x1), a1, int(x2), a2,
                kv.value.real, kv.value.imag, kv.err]
    if family == "gue-minor":
        kv = kernel_gue_minor(GUEPoint(int(x1), a1), GUEPoint(int(x2), a2),
                              tol=tol)
        return [family, int(x1), a1, int(x2), a2,
                kv.value.real, kv.value.imag, kv.err]
    kv = kernel_pearcey(PearceyPoint(x1, a1), PearceyPoint(x2, a2), tol=tol)
    return [family, x1, a1, x2, a2, kv.value.real, kv.value.imag, kv.err]


def cmd_kernel(args, parser) -> int:
    _require(args, parser, "family", "args", "out")
    if args.family not in KERNEL_FAMILIES:
        parser.error(f"unknown family {args.family!r}")
    quads = _parse_quads(args.args, parser)
    if args.family == "finite":
        _require(args, parser, "eps", "t")
    if args.family == "tacnode":
        _require(args, parser, "eps_tac")
    rows = [_kernel_row(args.family, q, args) for q in quads]
    _write_csv(args.out,
               ["family", "x1", "m1_or_mu1", "x2", "m2_or_mu2",
                "re", "im", "err"],
               rows)
    return 0


# -------------------------------------------------------------- simulate

def cmd_simulate(args, parser) -> int:
    _require(args, parser, "levels", "eps", "t", "trials", "seed", "out")
    sim = SimConfig(levels=args.levels, eps_rate=args.eps, t_end=args.t,
                    trials=args.trials, seed=args.seed)
    occ = estimate_occupancy(sim)
    rows = [[p.m, p.x2, freq, stderr, sim.trials]
            for p, (freq, stderr) in sorted(occ.items(),
                                            key=lambda kv: (kv[0].m, kv[0].x2))]
    _write_csv(args.out, ["m", "x2", "freq", "stderr", "trials"], rows)

    if args.snapshots:
        snap_rows = []
        for trial, cfg in run_trials(sim):
            for m0, row in enumerate(cfg.levels):
                for x2 in row:
                    snap_rows.append([trial, m0 + 1, x2, x2 / 2.0])
        _write_csv(args.snapshots, ["trial", "m", "x2", "x"], snap_rows)

    if args.endpoints:
        with open(args.endpoints, encoding="utf-8") as fh:
            spec = json.load(fh)
        targets = []
        for m1, x21, m2, x22 in spec.get("pairs", []):
            targets.append(PairTarget(a=GridPoint(m1, x21),
                                      b=GridPoint(m2, x22)))
        for m, x2 in spec.get("endpoints", []):
            targets.append(EndpointTarget(at=GridPoint(m, x2)))
        est = estimate_pair_and_endpoints(sim, targets)
        out_rows = []
        for tgt in targets:
            freq, stderr = est[tgt]
            if isinstance(tgt, PairTarget):
                out_rows.append(["pair", tgt.a.m, tgt.a.x2, tgt.b.m, tgt.b.x2,
                                 freq, stderr, sim.trials])
            else:
                out_rows.append(["endpoint", tgt.at.m, tgt.at.x2,
                                 tgt.at.m + 2, tgt.at.x2,
                                 freq, stderr, sim.trials])
        _write_csv(args.targets_out,
                   ["kind", "m1", "x21", "m2", "x22",
                    "freq", "stderr", "trials"],
                   out_rows)
    return 0


# ----------------------------------------------------- density map, boundary

def cmd_density_map(args, parser) -> int:
    _require(args, parser, "out")
    if args.xi_steps < 1 or args.mu_steps < 1:
        parser.error("grid steps must be >= 1")
    xis = np.linspace(args.xi_min, args.xi_max, args.xi_steps)
    mus = np.linspace(args.mu_min, args.mu_max, args.mu_steps)
    rows = []
    for xi in xis:
        for mu in mus:
            res = saddle(MacroPoint(xi=float(xi), mu=float(mu),
                                    tau=args.tau, eps_rate=args.eps))
            region = "out" if res.region == "outside" else res.region
            rows.append([xi, mu, region, res.density])
    _write_csv(args.out, ["xi", "mu", "region", "density"], rows)
    return 0


def cmd_boundary(args, parser) -> int:
    _require(args, parser, "out")
    if args.samples < 2:
        parser.error("--samples must be >= 2")
    half = max(args.samples // 2, 2)
    grid = np.geomspace(args.z_min, args.z_max, half)
    # force the cusp preimages z = +-1 onto the grid
    zs = np.unique(np.concatenate([grid, -grid, [1.0, -1.0]]))
    pts = boundary_curve(args.eps, args.tau, [float(z) for z in zs])
    _write_csv(args.out, ["z", "xi", "mu"],
               [[p.z_real, p.xi, p.mu] for p in pts])
    return 0


# -------------------------------------------------------------- converge

def _converge_rows(target, scales, tuples, args):
    rows = []
    for quad in tuples:
        x1, a1, x2, a2 = quad
        if target == "tacnode":
            pa = TacnodePoint(int(x1), a1)
            pb = TacnodePoint(int(x2), a2)
            lim = kernel_tacnode(pa, pb, TacnodeParams(eps_tac=args.eps_tac))
            for L in scales:
                ap = scaled_finite_for_tacnode(L, args.eps_tac, pa, pb,
                                               tol=args.tol)
                rows.append([L, int(x1), a1, int(x2), a2, ap, lim])
        elif target == "gue":
            pa = GUEPoint(int(x1), a1)
            pb = GUEPoint(int(x2), a2)
            lim = kernel_gue_limit(pa, pb, branch=args.branch)
            for et in scales:
                ap = scaled_tacnode_for_gue(et, pa, pb, branch=args.branch,
                                            tol=args.tol)
                rows.append([et, int(x1), a1, int(x2), a2, ap, lim])
        elif target == "pearcey":
            pa = PearceyPoint(x1, a1)
            pb = PearceyPoint(x2, a2)
            lim = kernel_pearcey(pa, pb)
            for M in scales:
                ap = scaled_tacnode_for_pearcey(M, pa, pb, tol=args.tol,
                                                scaling=args.scaling)
                rows.append([M, x1, a1, x2, a2, ap, lim])
        else:  # nearby-sections: quad = (x1, da, x2, db)
            da, db = int(a1), int(a2)
            mu, et = args.mu, args.eps_tac
            base = kernel_tacnode(TacnodePoint(int(x1), mu),
                                  TacnodePoint(int(x2), mu),
                                  TacnodeParams(eps_tac=et))
            shift = 1.0 if (da < db and int(x1) == int(x2)) else 0.0
            for L in scales:
                m_win = math.floor(2 * L * L * (1.0 + mu / L) + 1e-12)
                m_lo = m_win if m_win % 2 == 1 else m_win - 1
                params = ModelParams(eps_rate=et / L, t=et * L)
                ap = kernel_finite(GridPoint(m_lo + da, 2 * int(x1)),
                                   GridPoint(m_lo + db, 2 * int(x2)),
                                   params, scheme="sigma", tol=args.tol)
                lim_val = base.value - shift
                rows.append([L, int(x1), mu + da / (2.0 * L),
                             int(x2), mu + db / (2.0 * L),
                             ap, None, lim_val, base.err])
    out = []
    for row in rows:
        if row[6] is None:
            scale, x1, a1, x2, a2, ap, _, lim_val, lim_err = row
            lim_re, lim_im = lim_val, 0.0
        else:
            scale, x1, a1, x2, a2, ap, lim = row
            lim_re, lim_im = lim.value.real, lim.value.imag
        out.append([scale, x1, a1, x2, a2,
                    ap.value.real, ap.value.imag, lim_re, lim_im,
                    abs(complex(ap.value) - complex(lim_re, lim_im))])
    return out


def cmd_converge(args, parser) -> int:
    _require(args, parser, "target", "scales", "out")
    if args.target not in ("tacnode", "gue", "pearcey", "nearby-sections"):
        parser.error(f"unknown target {args.target!r}")
    scales = sorted(set(args.scales))
    if not scales:
        parser.error("at least one scale is required")
    if any(s <= 0 for s in scales):
        parser.error("scales must be positive")
    if args.target == "gue":
        scales = scales[::-1]  # limit is eps -> 0, emit toward the limit
    if args.tuples:
        tuples = _parse_quads(args.tuples, parser)
    elif args.target == "gue":
        tuples = DEFAULT_TUPLES[f"gue:{args.branch}"]
    else:
        tuples = DEFAULT_TUPLES[args.target]
    # rows come out grouped per tuple, scales ordered toward the limit
    rows = _converge_rows(args.target, scales, tuples, args)
    _write_csv(args.out,
               ["scale", "x1", "mu1_or_nu1", "x2", "mu2_or_nu2",
                "approx_re", "approx_im", "limit_re", "limit_im", "abs_err"],
               rows)
    return 0


# ---------------------------------------------------------------- verify

def _suite_deform(args) -> list[float]:
    params = ModelParams(eps_rate=0.4, t=0.6)
    residuals = []
    for p1, p2 in VERIFY_POINTS:
        vals = [kernel_finite(p1, p2, params, scheme=s, tol=args.tol).value
                for s in ("original", "deformed", "sigma")]
        residuals.append(max(abs(vals[i] - vals[j])
                             for i in range(3) for j in range(i + 1, 3)))
    return residuals


def _suite_symmetry(args) -> list[float]:
    params = TacnodeParams(eps_tac=0.5, tol=args.tol)

    def K(x1, mu1, x2, mu2):
        return kernel_tacnode(TacnodePoint(x1, mu1), TacnodePoint(x2, mu2),
                              params).value

    residuals = []
    for x1, mu1, x2, mu2 in SYMMETRY_TUPLES:
        refl = abs(K(-x1, mu1, -x2, mu2) - K(x1 - 1, mu1, x2 - 1, mu2))
        delta = 1.0 if (x1, mu1) == (x2, mu2) else 0.0
        hole = abs((-1.0) ** (x1 - x2) * K(x1, -mu1, x2, -mu2)
                   - (delta - K(x1, mu1, x2, mu2)))
        residuals.extend([refl, hole])
    return residuals


def _suite_recurrence(args) -> list[float]:
    params = ModelParams(eps_rate=0.2, t=0.4)
    residuals = []
    for x, y, n, m in RECURRENCE_ARGS:
        residuals.extend(recurrence_residuals(x, y, n, m, params,
                                              tol=args.tol))
    return residuals


def cmd_verify(args, parser) -> int:
    suites = {"deform": _suite_deform, "symmetry": _suite_symmetry,
              "recurrence": _suite_recurrence}
    names = list(suites) if args.suite == "all" else [args.suite]
    report = {}
    ok = True
    for name in names:
        residuals = suites[name](args)
        worst = max(residuals)
        passed = worst <= args.threshold
        ok = ok and passed
        report[name] = {"max_residual": worst, "threshold": args.threshold,
                        "pass": passed, "residuals": residuals}
        print(f"{name}: max residual {worst:.3e} "
              f"(threshold {args.threshold:.1e}) -> "
              f"{'PASS' if passed else 'FAIL'}")
    if args.json_report:
        with open(args.json_report, "w", encoding="utf-8", newline="") as fh:
            json.dump({"schema": 1, "suites": report}, fh, indent=2,
                      sort_keys=True)
            fh.write("\n")
    return 0 if ok else 1


# ------------------------------------------------------------------ main

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tacnode-lab",
        description="Interlacing-process kernels, Monte Carlo and limits.")
    sub = parser.add_subparsers(dest="command", required=True)
    registry = {}

    def register(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(_fn=fn)
        registry[name] = sp
        return sp

    sp = register("kernel", cmd_kernel,
                  help="evaluate a kernel family on argument tuples")
    sp.add_argument("--family", choices=KERNEL_FAMILIES)
    sp.add_argument("--args", nargs="+", metavar="X1,A1,X2,A2",
                    help="argument quadruples")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--out", help="output CSV path")
    sp.add_argument("--eps", type=float, help="finite family: rate asymmetry")
    sp.add_argument("--t", type=float, help="finite family: elapsed time")
    sp.add_argument("--scheme", default="deformed",
                    choices=("original", "deformed", "sigma"))
    sp.add_argument("--eps-tac", type=float, help="tacnode family: parameter")
    sp.add_argument("--branch", default="negative",
                    choices=("negative", "nonnegative"))

    sp = register("simulate", cmd_simulate,
                  help="Monte Carlo occupancy of the interlacing dynamics")
    sp.add_argument("--levels", type=int)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    sp.add_argument("--snapshots", help="per-trial terminal configurations")
    sp.add_argument("--endpoints",
                    help="JSON file with pair/endpoint targets")
    sp.add_argument("--targets-out", default="target_estimates.csv")

    sp = register("density-map", cmd_density_map,
                  help="limit-shape region and density on a (xi, mu) grid")
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--tau", type=float, default=0.5)
    sp.add_argument("--xi-min", type=float, default=-3.0)
    sp.add_argument("--xi-max", type=float, default=3.0)
    sp.add_argument("--xi-steps", type=int, default=61)
    sp.add_argument("--mu-min", type=float, default=0.0)
    sp.add_argument("--mu-max", type=float, default=6.0)
    sp.add_argument("--mu-steps", type=int, default=61)
    sp.add_argument("--out")

    sp = register("boundary", cmd_boundary,
                  help="liquid-region boundary curve samples")
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--tau", type=float, default=0.5)
    sp.add_argument("--z-min", type=float, default=0.05)
    sp.add_argument("--z-max", type=float, default=20.0)
    sp.add_argument("--samples", type=int, default=400)
    sp.add_argument("--out")

    sp = register("converge", cmd_converge,
                  help="scaling-limit convergence tables")
    sp.add_argument("--target",
                    choices=("tacnode", "gue", "pearcey", "nearby-sections"))
    sp.add_argument("--scales", nargs="+", type=float)
    sp.add_argument("--tuples", nargs="+", metavar="X1,A1,X2,A2",
                    help="override the default argument tuples")
    sp.add_argument("--eps-tac", type=float, default=0.5)
    sp.add_argument("--branch", default="negative",
                    choices=("negative", "nonnegative"))
    sp.add_argument("--scaling", default="corrected",
                    choices=("corrected", "paper-variant"))
    sp.add_argument("--mu", type=float, default=0.25,
                    help="nearby-sections: window height")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--out")

    sp = register("verify", cmd_verify,
                  help="kernel identity suites with residual report")
    sp.add_argument("--suite", default="all",
                    choices=("deform", "symmetry", "recurrence", "all"))
    sp.add_argument("--threshold", type=float, default=1e-8)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--json-report", help="write residuals as JSON")

    for sp in registry.values():
        sp.add_argument("--config", help="JSON config file (schema 1)")
    return parser, registry


def _apply_config(argv, parser, registry):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config: {exc}")
    if not isinstance(cfg, dict) or cfg.get("schema") != 1:
        parser.error("config must be a JSON object with schema: 1")
    cfg = {k: v for k, v in cfg.items() if k != "schema"}
    command = next((a for a in rest if not a.startswith("-")), None)
    if command not in registry:
        parser.error("config requires a known subcommand")
    sp = registry[command]
    dests = {a.dest for a in sp._actions}
    unknown = set(cfg) - dests
    if unknown:
        parser.error(f"unknown config keys: {sorted(unknown)}")
    sp.set_defaults(**cfg)


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, registry = _build_parser()
    _apply_config(argv, parser, registry)
    args = parser.parse_args(argv)
    try:
        return args._fn(args, parser)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
