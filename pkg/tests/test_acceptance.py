"""Acceptance criteria 1-11 with their tolerances pinned.

Each test records one PASS/FAIL line (see ``conftest.py``) and then asserts
the same condition, so a failing criterion shows up both in the summary and
as a failed test.
"""

import math
import time

import numpy as np
import pytest

from scatterkit.cli import main
from scatterkit.delta import (
    _square_well_printed,
    delta_term_1d,
    delta_term_radial,
    delta_term_square_well,
    delta_term_transparency,
    transparency_momentum,
)
from scatterkit.golden import SQUARE_WELL_PAIRS, verify
from scatterkit.oracle import RadialWell, cesaro_delta_extract, radial_cesaro_extract, radial_ode_solve
from scatterkit.overlap import WindowSpec, overlap_from_boundary, overlap_window, regularized_overlap
from scatterkit.potentials import make_potential
from scatterkit.regcompare import (
    boundary_reduction_residual,
    lorentzian_integral_oracle,
    lorentzian_modulus,
    regcompare,
    residual_scaling,
)
from scatterkit.special import airy_overlap_smeared, gaussian_target
from scatterkit.states import coefficients, solve_matching_system, square_well_coefficients
from scatterkit.wavepacket import delta_matrix, gaussian_profile, norm_drift_bound, norm_trace, position_space_norm

pytestmark = pytest.mark.acceptance

WELL = make_potential("squarewell", V0=0.5, a=2.0)


def _d1(p, k1, k2):
    c1, c2 = coefficients(p, k1), coefficients(p, k2)
    return delta_term_1d(c1.R, c1.T, c2.R, c2.T, k1, k2)


def _flux_defect(p, ks):
    return max(abs(abs(c.R) ** 2 + abs(c.T) ** 2 - 1) for c in (coefficients(p, k) for k in ks))


def test_criterion_01_flux_unitarity(report):
    t0 = time.perf_counter()
    ks = np.linspace(0.05, 8.0, 200)
    params = [(V0, a) for V0 in (-3.0, -1.0, -0.2, 0.3, 0.7, 1.9, 4.0, 11.0, 25.0, 40.0)
              for a in (0.5, 2.0)]
    worst_sw = 0.0
    n_evanescent = 0
    for V0, a in params:
        kk = ks[np.abs(ks * ks / 2 - V0) > 1e-6]
        n_evanescent += int(np.sum(kk * kk / 2 < V0))
        worst_sw = max(worst_sw, _flux_defect(make_potential("squarewell", V0=V0, a=a), kk))
    worst_delta = max(_flux_defect(make_potential("delta", g=g), ks) for g in (-1.0, -0.3, 2.0))
    worst_sech = max(_flux_defect(make_potential("sech2", V0=V0, mu=mu), ks)
                     for V0, mu in ((-0.3, 1.0), (-1.0, 1.0), (-2.5, 2.0), (0.05, 1.0), (0.1, 1.5)))
    dt = time.perf_counter() - t0
    worst = max(worst_sw, worst_delta, worst_sech)
    ok = worst <= 1e-10
    report(1, ok, f"max | |R|^2+|T|^2-1 | = {worst:.2e} (square well {worst_sw:.1e} over 20 sets, "
                  f"{n_evanescent} evanescent points; delta {worst_delta:.1e}; sech2 {worst_sech:.1e}); "
                  f"{dt:.2f} s")
    assert ok


def test_criterion_02_closed_form_vs_matching(report):
    worst = 0.0
    worst_printed = 0.0
    for V0 in (-1.0, 0.5, 3.0):
        p = make_potential("squarewell", V0=V0, a=2.0)
        for k in np.linspace(0.1, 5.0, 60):
            if abs(k * k / 2 - V0) < 1e-6:
                continue
            a, b = square_well_coefficients(k, p), solve_matching_system(k, p)
            pr = square_well_coefficients(k, p, strict_paper=True)
            for f in ("R", "T", "A_plus", "A_minus"):
                worst = max(worst, abs(getattr(a, f) - getattr(b, f)))
                worst_printed = max(worst_printed, abs(getattr(pr, f) - getattr(b, f)))
    ok = worst <= 1e-11
    report(2, ok, f"resolved closed form vs matching system {worst:.2e}; printed interior amplitudes "
                  f"off by up to {worst_printed:.2e} (missing e^(+-i k a/2) phases, documented deviation)")
    assert ok


def test_criterion_03_boundary_reduction(report):
    rng = np.random.default_rng(3)
    worst = 0.0
    for i in range(500):
        if i % 2:
            p = make_potential("free")
        else:
            p = make_potential("squarewell", V0=float(rng.uniform(-2, 2)), a=float(rng.uniform(0.5, 3)))
        k1, k2 = (float(v) for v in rng.uniform(0.2, 5.0, size=2))
        if abs(k1 - k2) < 1e-3:
            continue
        if p.family.value == "squarewell" and min(abs(k * k / 2 - p.strength) for k in (k1, k2)) < 1e-6:
            continue
        h = p.width / 2
        w = WindowSpec(-h - float(rng.uniform(0, 30)), h + float(rng.uniform(0, 30)))
        a, b = overlap_window(p, k1, k2, w), overlap_from_boundary(p, k1, k2, w)
        worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
    ok = worst <= 1e-10
    report(3, ok, f"overlap_window vs overlap_from_boundary, 500 random cases, max relative error {worst:.2e}")
    assert ok


def test_criterion_04_delta_orthogonality(report):
    p = make_potential("delta", g=-1.0)
    ks = np.linspace(0.1, 6.0, 50)
    w1 = w2 = 0.0
    for k1 in ks:
        for k2 in ks:
            if k1 == k2:
                continue
            w1 = max(w1, abs(_d1(p, k1, k2)))
            w2 = max(w2, abs(regularized_overlap(p, k1, k2).finite_remainder))
    ok = max(w1, w2) <= 1e-10
    report(4, ok, f"50x50 grid: max |Delta| boundary-reduced {w1:.2e}, regularized {w2:.2e}")
    assert ok


def test_criterion_05_square_well_nonorthogonality(report):
    lam0 = 1e3 * WELL.width
    worst_mean = worst_fit = 0.0
    smallest = math.inf
    three_way = 0.0
    printed = 0.0
    for k1, k2 in SQUARE_WELL_PAIRS:
        e1 = cesaro_delta_extract(WELL, k1, k2, lam0)
        e2 = cesaro_delta_extract(WELL, k1, k2, 2 * lam0)
        ref = _d1(WELL, k1, k2)
        cesaro = -e2.averaged
        fit = -e2.fit_finite_part
        smallest = min(smallest, abs(cesaro))
        worst_mean = max(worst_mean, abs(cesaro - ref))
        worst_fit = max(worst_fit, abs(fit - ref), abs(-e1.fit_finite_part - ref))
        three_way = max(three_way, abs(delta_term_square_well(k1, k2, WELL) - ref), abs(fit - ref))
        printed = max(printed, abs(_square_well_printed(k1, k2, WELL.strength, WELL.width) - ref))
    ok = smallest > 1e-6 and worst_mean <= 1e-6
    report(5, ok, f"running-mean Delta: min |Delta| {smallest:.2e}, max |mean - delta_term_1d| {worst_mean:.2e} "
                  f"(the plain mean tends to 0); fitted finite part vs delta_term_1d {worst_fit:.2e}; "
                  f"three-way spread {three_way:.2e}; printed square-well formula off by {printed:.2e} (reported)")
    assert ok


def test_criterion_06_transparency(report):
    V0, a = 0.5, 2.0
    worst = 0.0
    worst_printed = 0.0
    for n1, n2 in ((1, 2), (1, 3), (2, 3), (2, 4), (3, 6), (5, 4)):
        k1, k2 = transparency_momentum(n1, V0, a), transparency_momentum(n2, V0, a)
        ref = _d1(WELL, k1, k2)
        worst = max(worst, abs(delta_term_transparency(k1, k2, a, V0) - ref))
        worst_printed = max(worst_printed, abs(delta_term_transparency(k1, k2, a, V0, strict_paper=True) - ref))
    ok = worst <= 1e-10
    report(6, ok, f"resolved T = (-1)^n e^(-i k a): max error {worst:.2e}; printed T = e^(i k a) form "
                  f"off by {worst_printed:.2e}")
    assert ok


def test_criterion_07_airy(report):
    errs = {}
    for d in (0.0, 1.0, 3.0):
        v = airy_overlap_smeared(0.0, d, half_window=40.0, sigma=0.5, tol=math.inf)
        errs[d] = abs(v - gaussian_target(d, 0.5))
    worst = max(errs.values())
    ok = worst <= 1e-3
    report(7, ok, "smeared Airy overlap at T=40, sigma=0.5: errors "
                  + ", ".join(f"d={d:g}: {e:.2e}" for d, e in errs.items())
                  + " (window truncation tail; T=80 gives 6e-6)")
    assert ok


def test_criterion_08_radial(report):
    free = delta_term_radial(1, 1, 1, 1, 2, 0, 2, 0, 1.1, 1.7)
    V = RadialWell(-1.0, 1.5)
    k1, k2, r_max = 1.1, 1.7, 3.0
    c1, c2 = radial_ode_solve(V, k1, r_max), radial_ode_solve(V, k2, r_max)
    d = delta_term_radial(c1.T, c1.R, c2.T, c2.R, c1.phi0, c1.dphi0, c2.phi0, c2.dphi0, k1, k2)
    ext = radial_cesaro_extract(V, k1, k2, 200.0 * r_max, r_max)
    err_mean = abs(ext.averaged - d)
    err_fit = abs(ext.fit_finite_part - d)
    ok = abs(free) <= 1e-14 and abs(d) > 1e-6 and err_mean <= 1e-5
    report(8, ok, f"free radial Delta = {abs(free):.1e}; ODE square well Delta = {d:.6f}; "
                  f"|running mean - Delta| {err_mean:.2e} (the plain mean tends to 0); "
                  f"|fitted finite part - Delta| {err_fit:.2e}")
    assert ok


def test_criterion_09_appendix_b(report):
    eps = 1e-3
    w = np.linspace(-1, 1, 11)
    lor = max(abs(lorentzian_modulus(w, eps) - 1 / (w * w + 4 * eps * eps)))
    lint = abs(lorentzian_integral_oracle(eps) - math.pi / (2 * eps)) / (math.pi / (2 * eps))
    r = regcompare(WELL, 1.7, 1.1, eps=eps)
    ratio = r.window_norm_oracle / r.window_norm_paper
    free_res = max(abs(boundary_reduction_residual(make_potential("free"), 1.1, 1.7, e, WindowSpec(0.0, math.inf)))
                   for e in (1e-5, 1e-3, 1e-1))
    fit = residual_scaling(WELL, 1.1, 1.7, WindowSpec(-20.0, -1.0))
    ok = (lor <= 1e-8 and lint <= 1e-8 and abs(ratio - 2) < 1e-8 and free_res <= 1e-12
          and np.min(fit.residuals) > 0 and fit.r_squared >= 0.999)
    report(9, ok, f"(a) Lorentzian {lor:.1e}, integral rel. error {lint:.1e}; (b) normalization oracle "
                  f"{r.window_norm_oracle:.6f} vs stated {r.window_norm_paper:.6f}, ratio {ratio:.9f}; "
                  f"(c) free residual {free_res:.1e}, square-well fit R^2 {fit.r_squared:.6f}, "
                  f"log-log slope {fit.loglog_slope:.3f}")
    assert ok


def test_criterion_10_wave_packets(report):
    t0 = time.perf_counter()
    times = np.linspace(0.0, 100.0, 21)
    prof = gaussian_profile(5.0, 0.5, n=1024)
    const = 0.0
    for p in (make_potential("free"), make_potential("delta", g=-1.0)):
        re, _ = norm_trace(p, prof, times)
        const = max(const, np.max(np.abs(re - re[0])) / re[0])
    well_prof = gaussian_profile(5.0, 0.5, n=1024)
    M = delta_matrix(WELL, well_prof.k_grid)
    re, _ = norm_trace(WELL, well_prof, times)
    drift = (np.max(re) - np.min(re)) / np.max(re)
    bound = norm_drift_bound(well_prof, M)
    bounded = bool(np.all(np.abs(re - re[0]) <= bound))
    sample = np.array([0.0, 1.0, 5.0, 10.0, 25.0, 50.0])
    oracle = position_space_norm(WELL, 5.0, 0.5, sample)
    model, _ = norm_trace(WELL, well_prof, sample)
    mismatch = np.abs(model - oracle) / oracle
    dt = time.perf_counter() - t0
    ok = const <= 1e-8 and drift > 1e-6 and bounded and np.max(mismatch) <= 1e-4
    report(10, ok, f"free/delta relative variation {const:.1e}; square-well drift {drift:.2e}, bounded "
                   f"{bounded} (bound {bound:.2e}); model vs position-space oracle max rel. "
                   f"{np.max(mismatch):.2e} at t={sample[np.argmax(mismatch)]:g} (oracle stays "
                   f"at 2 pi to {np.max(np.abs(oracle - 2 * math.pi)):.0e}); {dt:.1f} s")
    assert ok


def test_criterion_11_golden_and_determinism(report, tmp_path, capsys):
    results = verify()
    golden_ok = all(r[3] for r in results)
    commands = [
        ["coeffs", "--potential", "sech2:V0=-0.3", "--k", "1.4"],
        ["flux-scan", "--potential", "squarewell:V0=0.5,a=2", "--kmin", "0.2", "--kmax", "4", "--nk", "50"],
        ["delta-term", "--potential", "squarewell:V0=0.5,a=2", "--k1", "1.1", "--k2", "1.7"],
        ["wavepacket-norm", "--potential", "squarewell:V0=0.5,a=2", "--n", "128", "--tmax", "10", "--nt", "5"],
        ["golden-verify"],
    ]
    same = True
    for i, argv in enumerate(commands):
        outs = []
        for j in range(2):
            path = tmp_path / f"{i}_{j}.csv"
            main(argv + ["--output", str(path)])
            outs.append(path.read_bytes())
        same &= outs[0] == outs[1] and len(outs[0]) > 0
    ok = golden_ok and same
    report(11, ok, f"golden-verify {sum(r[3] for r in results)}/{len(results)} records; "
                   f"{len(commands)} CSV commands byte-identical on rerun: {same}")
    assert ok
