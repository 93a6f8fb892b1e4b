"""End-to-end checks: the Remez-type lemma, the local estimate, the full
inequality on random spectral functions, and the optimality example."""
from __future__ import annotations

import io
import math
import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize_scalar

from .bernstein import (DivergenceConstant, FractionalLaplacian, classify_elements,
                        effective_lambda, log_h)
from .constants import LSConstantInput, theorem_constant, unit_ball_volume
from .covering import build_covering
from .errors import GeometryError, NotThick, PreconditionViolated, ZeroMass
from .geometry.domains import as_rectangle
from .geometry.measure import intersect_volume, thickness_of
from .geometry.quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_many
from .geometry.shapes import Box, diameter
from .spectral import BoundaryCondition, RectangleTrig, SpectralFunction, random_function

LOCAL_TOL = 1e-6


# ---------------------------------------------------------------- Remez lemma

@dataclass
class RemezResult:
    lhs: float
    rhs: float
    log_rhs: float
    M: float
    sup_E: float
    measure_E: float
    holds: bool


def _merge(intervals):
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    out = []
    for a, b in ivs:
        if not (0 <= a < b <= 1):
            raise PreconditionViolated(f"interval ({a}, {b}) is not a subinterval of [0,1]")
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _sup_interval(fun, a: float, b: float, grid: int) -> float:
    t = np.linspace(a, b, grid)
    v = fun(t)
    best = float(v.max())
    h = (b - a) / (grid - 1)
    for i in np.argsort(v)[-3:]:
        lo, hi = max(a, t[i] - h), min(b, t[i] + h)
        if hi > lo:
            res = minimize_scalar(lambda s: -float(fun(np.array([s]))[0]), bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-12 * max(1.0, b - a)})
            best = max(best, -float(res.fun))
    return best


def remez_check(coeffs, E, grid: int = 4096) -> RemezResult:
    """Compare ``sup_[0,1] |phi|`` with ``(12/|E|)^(2 log M / log 2) sup_E |phi|``.

    ``coeffs`` are ascending polynomial coefficients; ``M = sup_{|z|=4} |phi|``.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0 or abs(c[0]) < 1 - 1e-12:
        raise PreconditionViolated("|phi(0)| must be at least 1")
    ivs = _merge(E)
    meas = sum(b - a for a, b in ivs)
    if meas <= 0:
        raise PreconditionViolated("E must have positive measure")

    def absval(t):
        return np.abs(P.polyval(t, c))

    lhs = _sup_interval(absval, 0.0, 1.0, grid)
    sup_E = max(_sup_interval(absval, a, b, max(64, int(grid * (b - a)))) for a, b in ivs)
    M = _sup_interval(lambda th: np.abs(P.polyval(4 * np.exp(1j * th), c)), 0.0, 2 * math.pi, grid)
    M = max(M, 1.0)
    expo = 2 * math.log(M) / math.log(2)
    log_rhs = expo * math.log(12 / meas) + math.log(sup_E)
    holds = math.log(lhs) <= log_rhs + 1e-9
    rhs = math.exp(log_rhs) if log_rhs < 700 else math.inf
    return RemezResult(lhs, rhs, log_rhs, M, sup_E, meas, holds)


def random_remez_instance(rng: np.random.Generator, max_degree: int = 10, min_measure: float = 0.1):
    """Random polynomial with ``|phi(0)| = 1`` and a random union of intervals."""
    deg = int(rng.integers(0, max_degree + 1))
    c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    c = c / abs(c[0])
    while True:
        k = int(rng.integers(1, 4))
        pts = np.sort(rng.random(2 * k))
        ivs = [(pts[2 * i], pts[2 * i + 1]) for i in range(k) if pts[2 * i + 1] > pts[2 * i]]
        if ivs and sum(b - a for a, b in ivs) >= min_measure:
            return c, ivs


# ------------------------------------------------------------ local estimate

@dataclass
class LocalEstimateRecord:
    element_index: int
    lhs: float
    rhs: float
    M: float
    nu_j: float
    holds: bool
    log_rhs: float = -math.inf


def _stadium(a: float, b: float, r: float, s: np.ndarray) -> np.ndarray:
    """Boundary of ``[a, b] + D(r)`` at arclength parameters ``s`` (mod perimeter)."""
    L = b - a
    per = 2 * L + 2 * math.pi * r
    s = np.mod(s, per)
    z = np.empty(s.shape, dtype=complex)
    m1 = s < L
    z[m1] = a + s[m1] - 1j * r
    s2 = s - L
    m2 = (~m1) & (s2 < math.pi * r)
    z[m2] = b + r * np.exp(1j * (-math.pi / 2 + s2[m2] / r))
    s3 = s2 - math.pi * r
    m3 = (~m1) & (~m2) & (s3 < L)
    z[m3] = b - s3[m3] + 1j * r
    s4 = s3 - L
    m4 = ~(m1 | m2 | m3)
    z[m4] = a + r * np.exp(1j * (math.pi / 2 + s4[m4] / r))
    return z


def sup_on_thickened_box(f: SpectralFunction, box: Box, radii, n: int = 96) -> float:
    """``sup |f|`` over the distinguished boundary of ``box + D(radii)``.

    Coarse tensor grid on each axis' stadium boundary, then one local
    refinement around the coarse maximiser.
    """
    pers = [2 * s + 2 * math.pi * r for s, r in zip(box.sides, radii)]
    params = [np.arange(n) * p / n for p in pers]
    axes = [_stadium(a, a + s, r, t) for a, s, r, t in zip(box.corner, box.sides, radii, params)]
    vals = np.abs(f.grid_values(axes))
    idx = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[idx])
    fine = []
    for j in range(f.d):
        h = pers[j] / n
        t = params[j][idx[j]] + np.linspace(-1.5 * h, 1.5 * h, 25)
        fine.append(_stadium(box.corner[j], box.corner[j] + box.sides[j], radii[j], t))
    return max(best, float(np.abs(f.grid_values(fine)).max()))


def sup_on_thickened_shape(f: SpectralFunction, shape, radii, n: int = 24, ntorus: int = 32) -> float:
    """Sampled ``sup |f(x + w)|`` over ``x`` in the shape, ``|w_j| = radii_j``."""
    lo, hi = shape.bbox()
    axes = [np.linspace(lo[j], hi[j], n) for j in range(f.d)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, f.d)
    grid = np.vstack([grid[shape.contains(grid)], shape.vertices()])
    th = 2 * math.pi * np.arange(ntorus) / ntorus
    circ = np.stack(np.meshgrid(*[radii[j] * np.exp(1j * th) for j in range(f.d)], indexing="ij"),
                    -1).reshape(-1, f.d)
    best = 0.0
    for start in range(0, grid.shape[0], 64):
        pts = (grid[start:start + 64, None, :] + circ[None, :, :]).reshape(-1, f.d)
        best = max(best, float(np.abs(f(pts)).max()))
    return best


def local_estimate_check(f: SpectralFunction, element, omega, l, spec: QuadratureSpec | None = None,
                         element_index: int = 0, norms: tuple | None = None) -> LocalEstimateRecord:
    """Check ``||f||^2_{Q∩ω} >= 12 (nu / (24 d tau_d))^(4 log M/log 2 + 1) ||f||^2_Q``.

    ``norms`` may pass precomputed ``(||f||^2_Q, ||f||^2_{Q∩ω})``.
    """
    spec = spec or DEFAULT_SPEC
    Q = element.shape
    d = f.d
    if norms is None:
        full = float(integrate_many([Q], lambda x: np.abs(f(x)) ** 2, None, spec)[0])
        part = float(integrate_many([Q], lambda x: np.abs(f(x)) ** 2, omega, spec)[0])
    else:
        full, part = norms
    if full < 1e-14:
        raise ZeroMass("||f||^2 on the element is below the quadrature floor")
    psi = np.asarray(element.psi, dtype=float)
    diam = diameter(Q.vertices() @ psi.T)
    nu = abs(np.linalg.det(psi)) * intersect_volume(omega, Q) / diam**d
    radii = 4 * np.asarray(l, dtype=float)
    if isinstance(Q, Box):
        sup = sup_on_thickened_box(f, Q, radii)
    else:
        sup = sup_on_thickened_shape(f, Q, radii)
    M = max(1.0, math.sqrt(Q.volume()) / math.sqrt(full) * sup)
    expo = 4 * math.log(M) / math.log(2) + 1
    if nu <= 0:
        log_rhs = -math.inf
        rhs = 0.0
    else:
        log_rhs = math.log(12) + expo * (math.log(nu) - math.log(24 * d * unit_ball_volume(d))) + math.log(full)
        rhs = math.exp(log_rhs)
    holds = part >= rhs * (1 - LOCAL_TOL)
    return LocalEstimateRecord(element_index, part, rhs, M, nu, holds, log_rhs)


# ------------------------------------------------------- full inequality runs

CSV_COLUMNS = ["trial", "seed", "lambda", "norm_full", "norm_omega", "ratio_log", "const_log",
               "slack_log", "good_mass"]


@dataclass
class TrialRow:
    trial: int
    seed: int
    lam: float
    norm_full: float
    norm_omega: float
    ratio_log: float
    const_log: float
    slack_log: float
    good_mass: float
    local: list = field(default_factory=list)


@dataclass
class ExperimentReport:
    config: dict
    rows: list
    gamma: float
    covering_params: tuple
    log_h: float
    const_log: float

    @property
    def min_slack(self) -> float:
        return min(r.slack_log for r in self.rows) if self.rows else math.inf

    @property
    def pass_count(self) -> int:
        return sum(r.slack_log >= 0 for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.pass_count == len(self.rows)

    def local_records(self) -> list:
        return [rec for r in self.rows for rec in r.local]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.trial, r.seed, fmt17(r.lam), fmt17(r.norm_full), fmt17(r.norm_omega),
                        fmt17(r.ratio_log), fmt17(r.const_log), fmt17(r.slack_log), fmt17(r.good_mass)])
        return buf.getvalue()


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def spectral_basis_for(domain, bc, model):
    rect = as_rectangle(domain)
    if rect is None or not rect.bounded:
        raise GeometryError("sampling needs a bounded rectangle")
    scale = None
    if isinstance(model, DivergenceConstant):
        scale = (model.sigma_min,) * rect.dim
    return RectangleTrig(rect.as_box(), BoundaryCondition(bc), scale)


def basis_cap(model, lam: float) -> float:
    """Cap passed to mode enumeration for the basis built by ``spectral_basis_for``."""
    if isinstance(model, FractionalLaplacian):
        return effective_lambda(model, lam)
    return float(lam)


def ls_empirical(domain, bc, model, lam: float, omega, trials: int, seed: int,
                 spec: QuadratureSpec | None = None, rho: float = 0.1, m_max: int = 8,
                 local_estimates: bool = False, workers: int = 1) -> ExperimentReport:
    """Sample random spectral functions and compare the observed ratio with the constant."""
    spec = spec or DEFAULT_SPEC
    basis = spectral_basis_for(domain, bc, model)
    thick = thickness_of(omega, domain, rho, spec)
    if not thick.thick:
        raise NotThick(f"omega has zero thickness at rho={rho}")
    cov = build_covering(domain, rho)
    lh = log_h(model, cov.l, lam)
    const = theorem_constant(LSConstantInput(cov.kappa, domain.dim, tuple(cov.l), thick.gamma,
                                             cov.eta, rho, lh))
    cap = basis_cap(model, lam)
    box = basis.box

    def one(t: int) -> TrialRow:
        s = seed + t
        f = random_function(basis, cap, s)
        full = f.norm_sq_exact()
        w = float(integrate_many([box], lambda x: np.abs(f(x)) ** 2, omega, spec)[0])
        ratio = math.log(full / w) if w > 0 else math.inf
        cls = classify_elements(f, cov, model, lam, m_max, spec)
        recs = []
        if local_estimates:
            good = [e.element_index for e in cls.elements if e.good]
            shapes = [cov.elements[k].shape for k in good]
            parts = integrate_many(shapes, lambda x: np.abs(f(x)) ** 2, omega, spec) if good else []
            for k, part in zip(good, parts):
                recs.append(local_estimate_check(f, cov.elements[k], omega, cov.l, spec, k,
                                                 (cls.elements[k].norm_sq_local, float(part))))
        return TrialRow(t, s, float(lam), full, w, ratio, const.log_value, const.log_value - ratio,
                        cls.good_mass, recs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(trials)))
    else:
        rows = [one(t) for t in range(trials)]
    config = {"domain": repr(domain), "bc": str(BoundaryCondition(bc).value), "model": repr(model),
              "lambda": lam, "rho": rho, "trials": trials, "seed": seed, "m_max": m_max}
    return ExperimentReport(config, rows, thick.gamma, cov.params, lh, const.log_value)


# ------------------------------------------------------- optimality example

@dataclass
class OptimalityResult:
    alpha: int
    gamma: float
    T: int
    norm_sq_omega: float
    norm_sq_full: float
    tail_bound: float
    paper_bound: float
    holds: bool
    fft_outside_fraction: float
    fft_ok: bool


def g_values(t: np.ndarray, alpha: int) -> np.ndarray:
    """``(sin(2 pi t)/t)^alpha`` with the limit ``(2 pi)^alpha`` at 0."""
    return (2 * math.pi * np.sinc(2 * np.asarray(t))) ** alpha


def _g_sq(alpha):
    return lambda x: g_values(x[:, 0], alpha) ** 2


def optimality_norms(alpha: int, gamma: float, T: int, spec: QuadratureSpec | None = None):
    spec = spec or DEFAULT_SPEC
    full = 2 * float(integrate_many([Box([0.0], [float(T)])], _g_sq(alpha), None, spec)[0])
    pieces = [Box([n + 0.5 - gamma / 2], [gamma]) for n in range(T)]
    vals = integrate_many(pieces, _g_sq(alpha), None, spec)
    return full, 2 * float(np.sum(vals))


def fourier_outside_fraction(alpha: int, T: float, samples_per_unit: int | None = None) -> float:
    """Energy of the sampled transform of ``g`` outside ``[-2 pi alpha, 2 pi alpha]``."""
    rate = samples_per_unit or 8 * alpha
    h = 1.0 / rate
    N = int(round(2 * T * rate))
    t = -T + h * np.arange(N)
    G = np.fft.fft(g_values(t, alpha))
    xi = 2 * math.pi * np.fft.fftfreq(N, d=h)
    energy = np.abs(G) ** 2
    outside = energy[np.abs(xi) > 2 * math.pi * alpha * (1 + 1e-9)].sum()
    return float(outside / energy.sum())


def optimality_example(alpha: int, gamma: float, spec: QuadratureSpec | None = None,
                       T: int | None = None, fft: bool = True) -> OptimalityResult:
    """Measured norms of ``g`` on R and on the periodic set against the bound
    ``2 pi^2 (3 pi gamma)^(2 alpha - 2)``."""
    if int(alpha) != alpha or alpha < 2:
        raise PreconditionViolated("alpha must be an integer >= 2")
    if not 0 < gamma < 1:
        raise PreconditionViolated("gamma must lie in (0, 1)")
    alpha = int(alpha)
    if T is None:
        T = 200
        full, _ = optimality_norms(alpha, gamma, T, spec)
        need = (2.0 / ((2 * alpha - 1) * 1e-10 * full)) ** (1.0 / (2 * alpha - 1))
        T = max(T, int(math.ceil(need)))
    full, omega = optimality_norms(alpha, gamma, T, spec)
    tail = 2.0 * T ** (1 - 2 * alpha) / (2 * alpha - 1)
    bound = 2 * math.pi**2 * (3 * math.pi * gamma) ** (2 * alpha - 2)
    holds = (omega + tail <= bound) and full >= 1
    frac = fourier_outside_fraction(alpha, T) if fft else math.nan
    return OptimalityResult(alpha, gamma, T, omega, full, tail, bound, holds, frac,
                            bool(frac < 1e-6) if fft else True)


def optimality_slope(alpha: int, gammas=(0.1, 0.175, 0.25), spec: QuadratureSpec | None = None) -> float:
    """Least-squares slope of ``log ||g||^2_omega`` against ``log gamma``."""
    logs = [math.log(optimality_example(alpha, g, spec, fft=False).norm_sq_omega) for g in gammas]
    return float(np.polyfit(np.log(gammas), logs, 1)[0])
