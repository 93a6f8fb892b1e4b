"""Bernstein-type constants, derivative sums and good-element classification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Divergent, NotFound, ZeroMass
from .geometry.quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_many
from .spectral import (RectangleTrig, SpectralFunction, alpha_factorial, default_region,
                       multi_indices)

LOG_LINEAR_LIMIT = 700.0
H_FACTOR = 10.0


@dataclass(frozen=True)
class PureLaplacian:
    pass


@dataclass(frozen=True)
class FractionalLaplacian:
    s: float

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("fractional order must be positive")


@dataclass(frozen=True)
class DivergenceConstant:
    sigma_min: float

    def __post_init__(self):
        if not self.sigma_min > 0:
            raise ValueError("sigma_min must be positive")


@dataclass(frozen=True)
class HarmonicOscillator:
    """``delta=None`` selects ``delta = 1/(40 ||l||_1)`` from the covering."""

    delta: float | None = None

    def __post_init__(self):
        if self.delta is not None and not self.delta > 0:
            raise ValueError("delta must be positive")


BernsteinModel = PureLaplacian | FractionalLaplacian | DivergenceConstant | HarmonicOscillator


@dataclass(frozen=True)
class LogScalar:
    """A positive quantity stored by its logarithm."""

    log: float

    @property
    def value(self) -> float | None:
        if self.log >= LOG_LINEAR_LIMIT:
            return None
        return math.exp(self.log)


def canonical_delta(l1: float) -> float:
    return 1.0 / (40.0 * l1)


def resolve_delta(model: HarmonicOscillator, l1: float | None) -> float:
    if model.delta is not None:
        return model.delta
    if l1 is None or not l1 > 0:
        raise ValueError("the canonical delta needs ||l||_1 > 0")
    return canonical_delta(l1)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def log_c_b(model, m: int, lam: float, l1: float | None = None) -> float:
    """``log C_B(m, lambda)``; ``lambda`` is clamped at 0 and ``C_B(0)`` floored at 1."""
    if m < 0:
        raise ValueError("m must be non-negative")
    lam = max(float(lam), 0.0)
    if isinstance(model, PureLaplacian):
        out = m * _log(lam) if m else 0.0
    elif isinstance(model, FractionalLaplacian):
        out = (m / model.s) * _log(lam) if m else 0.0
    elif isinstance(model, DivergenceConstant):
        out = m * _log(lam / model.sigma_min) if m else 0.0
    elif isinstance(model, HarmonicOscillator):
        delta = resolve_delta(model, l1)
        out = (2 * m * math.log(2 * delta) + math.e / delta**2
               + 2 * math.lgamma(m + 1) + 2 * math.sqrt(lam) / delta)
    else:
        raise TypeError(f"unknown model {model!r}")
    if m == 0:
        out = max(out, 0.0)
    return out


def c_b(model, m: int, lam: float, l1: float | None = None) -> LogScalar:
    return LogScalar(log_c_b(model, m, lam, l1))


def effective_lambda(model, lam: float) -> float:
    """Cap of the Laplacian spectrum that carries the model's subspace."""
    lam = max(float(lam), 0.0)
    if isinstance(model, FractionalLaplacian):
        return lam ** (1.0 / model.s)
    if isinstance(model, DivergenceConstant):
        return lam / model.sigma_min
    return lam


def log_h(model, l, lam: float) -> float:
    """``log sum_m sqrt(C_B(m, lambda)) (10 ||l||_1)^m / m!`` in closed form.

    An explicitly chosen harmonic ``delta`` is summed term by term.
    """
    l1 = float(np.sum(np.abs(l)))
    lam = max(float(lam), 0.0)
    if isinstance(model, HarmonicOscillator):
        delta = resolve_delta(model, l1)
        ratio = 2 * H_FACTOR * delta * l1
        if ratio >= 1:
            raise Divergent(f"h series diverges: 20 delta ||l||_1 = {ratio:.4g} >= 1")
        if model.delta is not None:
            return log_h_series(model, l, lam)
        return math.e / (2 * delta**2) + math.sqrt(lam) / delta - math.log1p(-ratio)
    return H_FACTOR * l1 * math.sqrt(effective_lambda(model, lam))


def log_h_series(model, l, lam: float, max_terms: int = 100_000) -> float:
    """Direct summation of the series for ``h`` in log space."""
    l1 = float(np.sum(np.abs(l)))
    if isinstance(model, HarmonicOscillator):
        ratio = 2 * H_FACTOR * resolve_delta(model, l1) * l1
        if ratio >= 1:
            raise Divergent(f"h series diverges: ratio {ratio:.4g} >= 1")
    ll = math.log(H_FACTOR * l1) if l1 > 0 else -math.inf
    terms = []
    peak = -math.inf
    prev = math.inf
    for m in range(max_terms):
        lc = log_c_b(model, m, lam, l1)
        t = 0.5 * lc + (m * ll if m else 0.0) - math.lgamma(m + 1)
        if t == -math.inf and m > 0:
            break
        terms.append(t)
        peak = max(peak, t)
        if m > 2 and t < prev and t < peak + math.log(1e-18):
            break
        prev = t
    else:
        raise Divergent("h series did not converge")
    arr = np.array(terms)
    return peak + math.log(math.fsum(np.exp(arr - peak)))


@dataclass(frozen=True)
class BernsteinSum:
    value: float
    spectral: float | None = None


def _profile_integrand(f: SpectralFunction, m_max: int):
    alphas, groups, weights = [], [], []
    for m in range(m_max + 1):
        for a in multi_indices(f.d, m):
            alphas.append(a)
            groups.append(m)
            weights.append(1.0 / alpha_factorial(a))
    groups = np.array(groups)
    weights = np.array(weights)
    P = np.zeros((len(alphas), m_max + 1))
    P[np.arange(len(alphas)), groups] = weights

    def integrand(x):
        vals = f.derivatives(x, alphas)
        return (np.abs(vals) ** 2).T @ P

    return integrand


def bernstein_profile(f: SpectralFunction, m_max: int, regions, mask=None,
                      spec: QuadratureSpec | None = None) -> np.ndarray:
    """``sum_{|alpha|=m} ||d^alpha f||^2 / alpha!`` for ``m = 0..m_max`` on each region."""
    return integrate_many(list(regions), _profile_integrand(f, m_max), mask, spec or DEFAULT_SPEC)


def spectral_bernstein(f: SpectralFunction, m: int) -> float | None:
    """``(1/m!) sum mu_k^m |c_k|^2`` for the Laplacian basis on a rectangle."""
    if not isinstance(f.basis, RectangleTrig):
        return None
    mu = np.array([f.basis.laplacian_eigenvalue(mode.index) for mode, _ in f.terms])
    c2 = np.abs(f.coefficients()) ** 2
    return float(np.sum(mu**m * c2) / math.factorial(m))


def bernstein_sum(f: SpectralFunction, m: int, region=None, mask=None,
                  spec: QuadratureSpec | None = None) -> BernsteinSum:
    """Quadrature value of the order-m derivative sum, plus the spectral value when exact."""
    full = region is None and mask is None
    region = region or default_region(f)
    val = float(bernstein_profile(f, m, [region], mask, spec)[0, m])
    return BernsteinSum(val, spectral_bernstein(f, m) if full else None)


@dataclass
class ElementClassification:
    element_index: int
    bernstein_sums: np.ndarray
    norm_sq_local: float
    good: bool
    worst_margin: float


@dataclass
class Classification:
    elements: list = field(default_factory=list)
    good_mass: float = 0.0
    norm_sq_total: float = 0.0

    @property
    def good_indices(self) -> list[int]:
        return [e.element_index for e in self.elements if e.good]


ZERO_MASS = 1e-14
GOOD_TOL = 1e-9


def _relative_margins(lhs: np.ndarray, log_rhs: np.ndarray) -> np.ndarray:
    rhs = np.exp(np.minimum(log_rhs, LOG_LINEAR_LIMIT))
    with np.errstate(divide="ignore", invalid="ignore"):
        marg = np.where(rhs > 0, (rhs - lhs) / np.where(rhs > 0, rhs, 1.0),
                        np.where(lhs <= 0, 0.0, -np.inf))
    return marg


def classify_elements(f: SpectralFunction, cov, model, lam: float, m_max: int = 8,
                      spec: QuadratureSpec | None = None,
                      kappa: float | None = None) -> Classification:
    """Mark elements where every derivative sum stays below ``2^(m+1) kappa C_B / m!``.

    ``worst_margin`` is the smallest relative slack ``(rhs - lhs) / rhs`` over
    ``1 <= m <= m_max``.
    """
    kappa = cov.kappa if kappa is None else kappa
    l1 = float(np.sum(cov.l))
    shapes = [e.shape for e in cov.elements]
    prof = bernstein_profile(f, m_max, shapes, None, spec)
    ms = np.arange(1, m_max + 1)
    log_coef = np.array([(m + 1) * math.log(2) + math.log(kappa) + log_c_b(model, m, lam, l1)
                         - math.lgamma(m + 1) for m in ms])
    total = f.norm_sq_exact()
    out = Classification(norm_sq_total=total)
    good_mass = 0.0
    for k, row in enumerate(prof):
        local = float(row[0])
        sums = np.asarray(row[1:], dtype=float)
        if local < ZERO_MASS:
            out.elements.append(ElementClassification(k, sums, local, False, -math.inf))
            continue
        marg = _relative_margins(sums, log_coef + math.log(local))
        worst = float(np.min(marg)) if marg.size else math.inf
        good = worst >= -GOOD_TOL
        if good:
            good_mass += local
        out.elements.append(ElementClassification(k, sums, local, good, worst))
    out.good_mass = good_mass / total if total > 0 else 0.0
    return out


@dataclass
class GoodPoint:
    point: np.ndarray
    margins: np.ndarray
    level: int


def good_point(f: SpectralFunction, element, model, lam: float, kappa: float, m_max: int = 8,
               spec: QuadratureSpec | None = None, max_level: int = 6,
               l1: float | None = None) -> GoodPoint:
    """First grid point (nearest the element centre) satisfying the pointwise bound."""
    shape = element.shape
    if l1 is None:
        l1 = float(np.sum(element.bounding_l))
    local = float(bernstein_profile(f, 0, [shape], None, spec)[0, 0])
    if local < ZERO_MASS:
        raise ZeroMass("f vanishes on the element")
    vol = shape.volume()
    ms = np.arange(m_max + 1)
    log_rhs = np.array([(m + 1) * math.log(4) + math.log(kappa) + log_c_b(model, m, lam, l1)
                        - math.lgamma(m + 1) for m in ms]) + math.log(local / vol)
    alphas, groups, weights = [], [], []
    for m in ms:
        for a in multi_indices(f.d, int(m)):
            alphas.append(a)
            groups.append(int(m))
            weights.append(1.0 / alpha_factorial(a))
    P = np.zeros((len(alphas), m_max + 1))
    P[np.arange(len(alphas)), groups] = weights
    lo, hi = shape.bbox()
    centre = (lo + hi) / 2
    worst = -math.inf
    for level in range(max_level + 1):
        n = 2 ** (level + 1) - 1
        axes = [lo[j] + (hi[j] - lo[j]) * (np.arange(n) + 1) / (n + 1) for j in range(f.d)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, f.d)
        grid = grid[shape.contains(grid)]
        if grid.size == 0:
            continue
        grid = grid[np.argsort(np.linalg.norm(grid - centre, axis=1), kind="stable")]
        sums = (np.abs(f.derivatives(grid, alphas)) ** 2).T @ P
        marg = np.stack([_relative_margins(sums[:, m], np.full(grid.shape[0], log_rhs[m]))
                         for m in ms], axis=1)
        ok = np.all(marg >= -GOOD_TOL, axis=1)
        if ok.any():
            i = int(np.argmax(ok))
            return GoodPoint(grid[i], marg[i], level)
        worst = max(worst, float(np.max(np.min(marg, axis=1))))
    raise NotFound("no grid point satisfies the pointwise bound", worst)
