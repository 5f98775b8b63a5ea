"""Acceptance gate: one check per primary criterion, each printing a
single PASS/FAIL line (run with -s to see them on success)."""

import math
import time

import numpy as np
import pytest

from tacnode_lab.cli import main as cli_main
from tacnode_lab.correlations import endpoint_block_rho, rho
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
    kernel_pearcey,
    pearcey_chi_closed_form,
    pearcey_chi_quadrature,
    scaled_finite_for_tacnode,
    scaled_tacnode_for_gue,
    scaled_tacnode_for_pearcey,
)
from tacnode_lab.macro import F_derivatives, MacroPoint, boundary_curve, cusp_points, saddle
from tacnode_lab.simulate import (
    EndpointTarget,
    PairTarget,
    SimConfig,
    estimate_occupancy,
    estimate_pair_and_endpoints,
    init_config,
    run_trials,
)
from tacnode_lab.tacnode import (
    TacnodeParams,
    TacnodePoint,
    chi_term_bessel,
    chi_term_quadrature,
    kernel_tacnode,
)


def report(num, label, ok):
    print(f"[PRIMARY {num}] {label}: {'PASS' if ok else 'FAIL'}")
    return ok


def run_cli(*args):
    try:
        return cli_main([str(a) for a in args])
    except SystemExit as exc:
        return exc.code


def test_01_contour_scheme_equivalence():
    rng = np.random.default_rng(20260816)
    worst = 0.0
    for _ in range(20):
        eps = float(rng.choice([0.2, 0.4]))
        t = float(rng.choice([0.1, 0.5]))
        m1, m2 = int(rng.integers(1, 7)), int(rng.integers(1, 7))

        def draw_x2(m):
            cands = [v for v in range(-6, 7) if (v + m + 1) % 2 == 0]
            return int(rng.choice(cands))

        p1 = GridPoint(m1, draw_x2(m1))
        p2 = GridPoint(m2, draw_x2(m2))
        params = ModelParams(eps_rate=eps, t=t)
        a = kernel_finite(p1, p2, params, scheme="original", tol=1e-10).value
        b = kernel_finite(p1, p2, params, scheme="deformed", tol=1e-10).value
        worst = max(worst, abs(a - b))
    ok = worst <= 1e-8
    assert report(1, f"contour deformation equivalence (max {worst:.2e})", ok)


def test_02_level_recurrences():
    rng = np.random.default_rng(20260817)
    params = ModelParams(eps_rate=0.2, t=0.4)
    worst = 0.0
    for _ in range(20):
        n = int(rng.choice([1, 3, 5, 7, 9]))
        m = int(rng.choice([1, 3, 5, 7, 9]))
        x, y = float(rng.integers(-2, 3)), float(rng.integers(-2, 3))
        worst = max(worst, max(recurrence_residuals(x, y, n, m, params,
                                                    tol=1e-11)))

    def cross(eps):
        prm = ModelParams(eps_rate=eps, t=2 * eps)

        def K(x2, n, y2, m):
            return kernel_finite(GridPoint(n, x2), GridPoint(m, y2), prm,
                                 tol=1e-12).value

        val = (-K(0, 5, 0, 3) + K(0, 3, 0, 3)
               + K(0, 5, 0, 5) - K(0, 3, 0, 5))
        return abs(val - 1.0)

    ratio = (cross(0.1) / 0.1**2) / (cross(0.05) / 0.05**2)
    ok = worst <= 1e-8 and 0.5 <= ratio <= 2.0
    assert report(
        2, f"level recurrences (max {worst:.2e}, eps^2 ratio {ratio:.2f})", ok)


def test_03_kernel_symmetries():
    tuples20 = [(x1, mu1, x2, mu2)
                for x1 in (-2, -1, 0, 1, 2)
                for (mu1, x2, mu2) in ((0.3, 1 - abs(x1), -0.2),
                                       (-0.4, -x1, 0.25),
                                       (0.1, x1, 0.1),
                                       (0.5, 2 - x1, 0.35))]
    assert len(tuples20) == 20
    worst = 0.0
    for et in (0.25, 0.5, 1.0):
        prm = TacnodeParams(eps_tac=et)

        def K(x1, mu1, x2, mu2):
            return kernel_tacnode(TacnodePoint(x1, mu1),
                                  TacnodePoint(x2, mu2), prm).value

        for x1, mu1, x2, mu2 in tuples20:
            refl = abs(K(-x1, mu1, -x2, mu2) - K(x1 - 1, mu1, x2 - 1, mu2))
            delta = 1.0 if (x1, mu1) == (x2, mu2) else 0.0
            hole = abs((-1.0) ** (x1 - x2) * K(x1, -mu1, x2, -mu2)
                       - (delta - K(x1, mu1, x2, mu2)))
            worst = max(worst, refl, hole)
    ok = worst <= 1e-8
    assert report(3, f"reflection and hole symmetries (max {worst:.2e})", ok)


TACNODE_TUPLES = ((0, 0.0, 0, 0.0), (1, 0.1875, 0, 0.5),
                  (-2, -0.375, 1, 0.3125), (2, 0.625, -1, -0.1875),
                  (0, 0.25, 1, 0.0625))


def test_04_window_limit():
    ok = True
    finals = []
    for x1, mu1, x2, mu2 in TACNODE_TUPLES:
        pa, pb = TacnodePoint(x1, mu1), TacnodePoint(x2, mu2)
        lim = kernel_tacnode(pa, pb, TacnodeParams(eps_tac=0.5)).value
        devs = [abs(scaled_finite_for_tacnode(L, 0.5, pa, pb, tol=1e-9).value
                    - lim) for L in (8.0, 16.0, 32.0)]
        ok = ok and devs[0] > devs[1] > devs[2] and devs[2] <= 0.05
        finals.append(devs[2])
    assert report(
        4, f"window limit, 5 tuples (worst final {max(finals):.2e})", ok)


GUE_TUPLES = {
    "nonnegative": ((0, 0.35, 0, 0.1), (1, 0.2, 0, -0.3), (2, 0.4, 1, 0.1),
                    (0, -0.3, 1, 0.25), (1, 0.0, 2, -0.2)),
    "negative": ((-1, 0.1, -1, -0.15), (-1, 0.2, -2, -0.3),
                 (-2, 0.4, -1, 0.1), (-1, -0.3, -3, 0.25),
                 (-2, 0.0, -1, -0.2)),
}


def test_05_hard_edge_limit_and_normalization():
    ok = True
    for branch, tuples in GUE_TUPLES.items():
        for x1, mu1, x2, mu2 in tuples:
            pa, pb = GUEPoint(x1, mu1), GUEPoint(x2, mu2)
            lim = kernel_gue_limit(pa, pb, branch=branch).value
            devs = [abs(scaled_tacnode_for_gue(et, pa, pb, branch=branch,
                                               tol=1e-10).value - lim)
                    for et in (0.5, 0.25, 0.125)]
            ok = ok and devs[0] > devs[1] > devs[2]
    # indicator-active tuple (level gap 2) separates the two normalizations
    pa, pb = GUEPoint(2, -0.2), GUEPoint(0, 0.3)
    ap = scaled_tacnode_for_gue(0.125, pa, pb, branch="nonnegative",
                                tol=1e-10).value
    devs = {norm: abs(ap - kernel_gue_limit(
        pa, pb, branch="nonnegative", chi_normalization=norm).value)
        for norm in ("factorial", "paper")}
    selected = min(devs, key=devs.get)
    ok = ok and selected == "factorial"
    assert report(
        5, "hard-edge limit, 5 tuples/branch "
           f"(chi-normalization selected: {selected})", ok)


PEARCEY_TUPLES = ((0.0, 0.0, 0.0, 0.0), (0.0, 0.2, 0.0, -0.1),
                  (0.0, 0.5, 0.0, 0.3), (0.0, -0.2, 0.0, 0.4),
                  (0.0, 0.1, 0.0, 0.6))


def test_06_cusp_limit():
    ok = True
    worst_final, ratios = 0.0, []
    for xi1, nu1, xi2, nu2 in PEARCEY_TUPLES:
        pa, pb = PearceyPoint(xi1, nu1), PearceyPoint(xi2, nu2)
        lim = kernel_pearcey(pa, pb).value
        devs = [abs(scaled_tacnode_for_pearcey(M, pa, pb, tol=1e-9).value
                    - lim) for M in (4.0, 8.0, 16.0)]
        ok = ok and devs[0] > devs[1] > devs[2] and devs[2] <= 0.05
        worst_final = max(worst_final, devs[2])
        ratios.append(devs[0] / devs[2])
    # M^(-1/2) predicts dev(4)/dev(16) = 2; accept within a factor of 4
    ok = ok and all(0.5 <= r <= 8.0 for r in ratios)
    assert report(
        6, f"cusp limit, 5 tuples (final {worst_final:.2e}, "
           f"rate ratios {min(ratios):.1f}-{max(ratios):.1f})", ok)


def test_07_closed_forms():
    worst_p = 0.0
    for dnu in (0.5, 1.0, 2.0):
        for dxi in (0.0, 1.0, 3.0):
            q = pearcey_chi_quadrature(dnu, dxi, tol=1e-12).value
            worst_p = max(worst_p, abs(q - pearcey_chi_closed_form(dnu, dxi)))
    worst_b = 0.0
    for k in (0, 1, 2, 3, 4):
        for a in (0.3, 1.0, 2.5):
            q = chi_term_quadrature(k, a, tol=1e-12).value
            worst_b = max(worst_b, abs(q - chi_term_bessel(k, a)))
    ok = worst_p <= 1e-9 and worst_b <= 1e-9
    assert report(
        7, f"closed forms (heat {worst_p:.2e}, Bessel {worst_b:.2e})", ok)


def test_08_simulator_vs_kernel():
    t0 = time.time()
    sim = SimConfig(levels=6, eps_rate=0.3, t_end=0.5, trials=20000, seed=614)
    occ = estimate_occupancy(sim)
    params = ModelParams(eps_rate=0.3, t=0.5)
    packed = [GridPoint(m + 1, x2)
              for m, row in enumerate(init_config(6).levels) for x2 in row]
    agree = 0
    for p in packed:
        kv = kernel_finite(p, p, params, tol=1e-10)
        freq, se = occ.get(p, (0.0, 0.0))
        agree += abs(freq - kv.value.real) <= 3.0 * (se + kv.err)
    pair = PairTarget(a=GridPoint(2, 1), b=GridPoint(3, 0))
    endp = EndpointTarget(at=GridPoint(3, 0))
    est = estimate_pair_and_endpoints(sim, [pair, endp])
    fp, sp = est[pair]
    fe, se = est[endp]
    pv = rho([pair.a, pair.b],
             lambda a, b: kernel_finite(a, b, params, tol=1e-10))
    ev = endpoint_block_rho([endp.at], params, tol=1e-10)
    pair_ok = abs(fp - pv.value) <= 3.0 * (sp + pv.err)
    end_ok = abs(fe - ev.value) <= 3.0 * (se + ev.err)
    elapsed = time.time() - t0
    ok = agree >= math.ceil(0.95 * 21) and pair_ok and end_ok and elapsed < 300
    assert report(
        8, f"simulator vs kernel ({agree}/21 sites, pair and endpoint in "
           f"3 sigma, {elapsed:.0f}s)", ok)


def test_09_skellam_oracle():
    sim = SimConfig(levels=1, eps_rate=0.25, t_end=2.0, trials=100000,
                    seed=99)
    xs = np.array([cfg.levels[0][0] / 2.0 for _, cfg in run_trials(sim)])
    mean_th, var_th = 7.5, 8.5
    mu4 = var_th + 3.0 * var_th**2  # Skellam: k4 = k2, mu4 = k4 + 3 k2^2
    mean_dev = abs(xs.mean() - mean_th)
    var_dev = abs(xs.var() - var_th)
    ok = (mean_dev <= 3.0 * math.sqrt(var_th / sim.trials)
          and var_dev <= 3.0 * math.sqrt((mu4 - var_th**2) / sim.trials))
    assert report(
        9, f"Skellam marginal (mean dev {mean_dev:.3f}, "
           f"var dev {var_dev:.3f})", ok)


def test_10_macro_geometry():
    ok = True
    for eps in (0.2, 0.3, 0.5, 0.8):
        base = eps + 1.0 / eps
        ok = ok and cusp_points(eps, 0.5) == (base - 2.0, base + 2.0)
    # quartic-route density against the arccos closed form on 10 heights
    tau = eps = 0.5
    for k in range(10):
        mu = 0.7 + 0.4 * k
        s = (1 + eps * eps) / eps - mu / (2 * tau)
        expect = math.acos(s / 2.0) / math.pi if abs(s) < 2 else (
            1.0 if s <= -2 else 0.0)
        got = saddle(MacroPoint(1e-12, mu, tau, eps)).density
        ok = ok and abs(got - expect) <= 1e-9
    # boundary residuals
    for p in boundary_curve(0.5, 0.5, [-8.0, -3.0, -1.0, -0.4, 0.3, 1.0,
                                       2.7, 9.0]):
        mp = MacroPoint(p.xi, p.mu, tau, eps)
        _, f1, f2 = F_derivatives(complex(p.z_real), mp)
        scale = 1.0 + tau + abs(p.mu) + abs(p.xi)
        ok = ok and abs(f1) <= 1e-9 * scale and abs(f2) <= 1e-9 * scale

    # density continuity at three sections
    def locate(xi, lo, hi, region_above):
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            if saddle(MacroPoint(xi, mid, tau, eps)).region == region_above:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    for xi in (0.0, 0.35, 0.7):
        lower = locate(xi, 1e-6, 3.0, "D1")
        upper = locate(xi, 3.0, 20.0, "D2")
        ok = ok and abs(saddle(MacroPoint(xi, lower + 1e-3, tau,
                                          eps)).density) <= 0.02
        ok = ok and abs(saddle(MacroPoint(xi, upper - 1e-3, tau,
                                          eps)).density - 1.0) <= 0.02
    assert report(10, "macro geometry (cusps, axis density, boundary "
                      "residuals, continuity)", ok)


def test_11_byte_determinism(tmp_path):
    runs = {
        "kernel": ["kernel", "--family", "finite", "--eps", "0.3", "--t",
                   "0.5", "--args", "0,1,0,1", "1,2,-1,2"],
        "simulate": ["simulate", "--levels", "3", "--eps", "0.3", "--t",
                     "0.4", "--trials", "200", "--seed", "7"],
        "density-map": ["density-map", "--xi-steps", "5", "--mu-steps", "5"],
        "boundary": ["boundary", "--samples", "40"],
        "converge": ["converge", "--target", "gue", "--branch",
                     "nonnegative", "--tuples", "1,0.2,0,-0.3",
                     "--scales", "0.5", "0.25"],
    }
    ok = True
    for name, args in runs.items():
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{name}-{tag}.csv"
            code = run_cli(*args, "--out", out)
            ok = ok and code == 0
            outs.append(out.read_bytes())
        ok = ok and outs[0] == outs[1]
    # verify's JSON report is covered by the same contract
    reports = []
    for tag in ("a", "b"):
        path = tmp_path / f"verify-{tag}.json"
        code = run_cli("verify", "--suite", "recurrence",
                       "--json-report", path)
        ok = ok and code == 0
        reports.append(path.read_bytes())
    ok = ok and reports[0] == reports[1]
    assert report(11, "byte-identical CSV output across repeated runs", ok)
