"""The twelve acceptance criteria, each recording a single PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from lsverify.bernstein import (DivergenceConstant, HarmonicOscillator, PureLaplacian, bernstein_sum,
                                classify_elements, log_c_b, log_h, log_h_series)
from lsverify.constants import unit_ball_volume
from lsverify.covering import build_covering, product_covering, validate_covering
from lsverify.geometry import (Box, EquilateralTriangle, ExtendedInterval, GeneralizedRectangle,
                               QuadratureSpec, RightTriangle, Sector)
from lsverify.spectral import HermiteTensor, enumerate_modes, hermite_functions, random_function, single_mode
from lsverify.verify import (ls_empirical, optimality_example, random_remez_instance, remez_check)

from conftest import square_pattern, unit_square

MC = QuadratureSpec(mc_samples=1_000_000, seed=12345)
LAM = 200.0


def spectral_side(f, m):
    return sum(mode.eigenvalue**m * abs(c) ** 2 for mode, c in f.terms) / math.factorial(m)


def test_c01_spectral_identity(corpus, criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for f in corpus:
        for m in range(5):
            exact = spectral_side(f, m)
            worst = max(worst, abs(bernstein_sum(f, m).value - exact) / exact)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 120
    assert criterion(1, ok, f"max relative error {worst:.2e} over 20 functions, m<=4; {dt:.1f}s")


def test_c02_bernstein_inequality(corpus, dirichlet_basis, criterion):
    excess = -math.inf
    for f in corpus:
        for m in range(9):
            bound = LAM**m / math.factorial(m) * f.norm_sq_exact()
            excess = max(excess, (bernstein_sum(f, m).value - bound) / (LAM**m / math.factorial(m)))
    sat = 0.0
    for mode in enumerate_modes(dirichlet_basis, LAM)[::7]:
        g = single_mode(dirichlet_basis, mode.index, mode.eigenvalue)
        for m in range(9):
            target = mode.eigenvalue**m / math.factorial(m)
            sat = max(sat, abs(bernstein_sum(g, m).value - target) / target)
    ok = excess <= 1e-6 and sat <= 1e-6
    assert criterion(2, ok, f"max normalised excess {excess:.2e}; saturation error {sat:.2e}")


def test_c03_h_closed_forms(criterion):
    models = [PureLaplacian(), DivergenceConstant(2.0), HarmonicOscillator()]
    worst = 0.0
    for model in models:
        for l1 in (0.05, 0.1, 0.2):
            for lam in (0.0, 1.0, 10.0, 100.0):
                l = (l1 / 2, l1 / 2)
                closed, series = log_h(model, l, lam), log_h_series(model, l, lam)
                # relative error of h itself; log h vanishes at lambda = 0 for some models
                worst = max(worst, math.expm1(abs(series - closed)))
    assert criterion(3, worst <= 1e-10, f"max relative error of h, series vs closed form {worst:.2e} on 36 cases")


def test_c04_unit_ball(criterion):
    ref = [2, math.pi, 4 * math.pi / 3, math.pi**2 / 2, 8 * math.pi**2 / 15]
    err = max(abs(unit_ball_volume(d) - v) for d, v in zip(range(1, 6), ref))
    assert criterion(4, err <= 1e-12, f"max error {err:.1e} for d<=5")


COVERING_CASES = [
    ("(0,2.5)", GeneralizedRectangle((ExtendedInterval(0, 2.5),)), 1.0, None),
    ("(0,1)^2", unit_square(), 0.1, None),
    ("sector pi/6", Sector(6), 1.0, Box((0, 0), (10, 10))),
    ("right pi/4", RightTriangle(4, 5.0), 1.0, None),
    ("right pi/3", RightTriangle(3, 5.0), 1.0, None),
    ("equilateral 3sqrt3", EquilateralTriangle(3 * math.sqrt(3)), 1.0, None),
]


def test_c05_coverings(criterion):
    parts, ok = [], True
    for name, dom, rho, win in COVERING_CASES:
        cov = build_covering(dom, rho, win)
        rep = validate_covering(cov, MC)
        good = rep.passed and rep.uncovered_fraction <= 1e-3 and rep.max_overlap_measured <= cov.kappa
        ok &= good
        parts.append(f"{name}: unc={rep.uncovered_fraction:.1e} mult={rep.max_overlap_measured}/{cov.kappa}"
                     f"{'' if good else ' FAILED'}")
    assert criterion(5, ok, "; ".join(parts))


def test_c06_product_lemma(criterion):
    base = build_covering(GeneralizedRectangle((ExtendedInterval(0, 1),)), 0.5)
    cov, parts, ok = base, [], True
    for d in range(1, 5):
        if d > 1:
            cov = product_covering(cov, base)
        rep = validate_covering(cov, MC)
        meas = min(c.eta_measured for c in rep.per_element)
        good = cov.eta >= (2 * d) ** (-d / 2) and meas >= cov.eta - 1e-9 and rep.passed
        ok &= good
        parts.append(f"d={d} eta={cov.eta:.4g} measured={meas:.4g}")
    assert criterion(6, ok, "; ".join(parts))


def test_c07_good_mass(dirichlet_basis, square_cov, criterion):
    masses = []
    for seed in range(50):
        f = random_function(dirichlet_basis, LAM, 1000 + seed)
        masses.append(classify_elements(f, square_cov, PureLaplacian(), LAM, 8).good_mass)
    ok = min(masses) >= 0.5 - 1e-3
    assert criterion(7, ok, f"min good mass {min(masses):.4f}, mean {np.mean(masses):.4f} over 50 functions")


@pytest.fixture(scope="module")
def ls_report():
    t0 = time.perf_counter()
    rep = ls_empirical(unit_square(), "dirichlet", PureLaplacian(), LAM, square_pattern(), 100, 0,
                       rho=0.1, m_max=8, local_estimates=True, workers=4)
    return rep, time.perf_counter() - t0


def test_c08_full_inequality(ls_report, criterion):
    rep, dt = ls_report
    ok = len(rep.rows) == 100 and all(r.slack_log > 0 for r in rep.rows) and dt < 600
    assert criterion(8, ok, f"{rep.pass_count}/100 trials, min slack_log {rep.min_slack:.4f} "
                            f"(log C = {rep.const_log:.4f}); {dt:.0f}s")


def test_c09_local_estimate(ls_report, criterion):
    rep, _ = ls_report
    recs = rep.local_records()
    n_ok = sum(r.holds for r in recs)
    ok = len(recs) > 0 and n_ok == len(recs)
    assert criterion(9, ok, f"holds on {n_ok}/{len(recs)} good elements across 100 trials")


def test_c10_remez(criterion):
    rng = np.random.default_rng(10)
    res = [remez_check(*random_remez_instance(rng, max_degree=10, min_measure=0.1)) for _ in range(200)]
    n_ok = sum(r.holds for r in res)
    assert criterion(10, n_ok == 200, f"{n_ok}/200 random instances hold")


def test_c11_optimality(criterion):
    gammas = (0.1, 0.25)
    parts, ok = [], True
    for alpha in (2, 3, 4):
        res = [optimality_example(alpha, g) for g in gammas]
        for r in res:
            ok &= r.holds and r.norm_sq_full >= 1 and r.fft_ok
        slope = float(np.polyfit(np.log(gammas), [math.log(r.norm_sq_omega) for r in res], 1)[0])
        slope_ok = abs(slope - (2 * alpha - 2)) <= 0.3
        ok &= slope_ok
        parts.append(f"alpha={alpha}: bound {'ok' if all(r.holds for r in res) else 'VIOLATED'}, "
                     f"fft {max(r.fft_outside_fraction for r in res):.1e}, "
                     f"slope {slope:.2f} vs {2 * alpha - 2}{'' if slope_ok else ' OUT'}")
    assert criterion(11, ok, "; ".join(parts))


def test_c12_hermite(criterion):
    t, w = np.polynomial.hermite.hermgauss(80)
    phi = hermite_functions(20, t) * np.exp(t * t / 2)
    ortho = float(np.max(np.abs((phi * w) @ phi.T - np.eye(21))))
    grid = np.linspace(-8, 8, 1601)[:, None]
    resid = 0.0
    for k in range(16):
        f = single_mode(HermiteTensor(1), (k,))
        r = -f(grid, (2,)) + grid[:, 0] ** 2 * f(grid) - (2 * k + 1) * f(grid)
        resid = max(resid, float(np.max(np.abs(r))))
    prod_ok = True
    for delta in (0.25, 0.5, 1.0):
        model = HarmonicOscillator(delta)
        for d in (1, 2, 3):
            for N in range(51):
                lam = 2 * N + d
                for m in range(31):
                    lhs = sum(math.log(lam + 2 * k) for k in range(m))
                    prod_ok &= lhs <= log_c_b(model, m, lam) + 1e-9
    ok = ortho <= 1e-8 and resid <= 1e-6 and prod_ok
    assert criterion(12, ok, f"orthonormality {ortho:.1e}, eigen-residual {resid:.1e}, "
                             f"product bound {'holds' if prod_ok else 'FAILS'}")
