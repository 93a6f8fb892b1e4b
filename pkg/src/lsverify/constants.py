"""Closed-form constants of the abstract thick-set inequality."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bernstein import LOG_LINEAR_LIMIT


def unit_ball_volume(d: int) -> float:
    """Lebesgue measure of the Euclidean unit ball in R^d."""
    if d < 1:
        raise ValueError("dimension must be positive")
    return math.exp(0.5 * d * math.log(math.pi) - math.lgamma(d / 2 + 1))


@dataclass(frozen=True)
class LSConstantInput:
    kappa: float
    d: int
    l: tuple
    gamma: float
    eta: float
    rho: float
    log_h: float

    def __post_init__(self):
        object.__setattr__(self, "l", tuple(float(v) for v in np.atleast_1d(self.l)))
        if len(self.l) != self.d:
            raise ValueError("l must have d entries")
        if not (0 < self.gamma <= 1):
            raise ValueError("gamma must lie in (0,1]")
        if not (0 < self.eta <= 1):
            raise ValueError("eta must lie in (0,1]")
        if self.kappa < 1 or self.rho <= 0 or min(self.l) <= 0:
            raise ValueError("kappa >= 1, rho > 0 and l > 0 are required")
        if min(self.l) < self.rho * (1 - 1e-12):
            raise ValueError("l must dominate rho componentwise")


@dataclass(frozen=True)
class LSConstantResult:
    log_base: float
    exponent: float
    log_value: float
    value: float | None


def theorem_constant(inp: LSConstantInput) -> LSConstantResult:
    """``(kappa/6) * base**exponent`` computed in log space.

    ``base = 24 d tau_d l_1...l_d / (gamma eta rho^d)`` and
    ``exponent = 2 log kappa / log 2 + 4 log h / log 2 + 5``.
    """
    d = inp.d
    log_base = (math.log(24 * d) + math.log(unit_ball_volume(d)) + sum(math.log(v) for v in inp.l)
                - math.log(inp.gamma) - math.log(inp.eta) - d * math.log(inp.rho))
    exponent = 2 * math.log(inp.kappa) / math.log(2) + 4 * inp.log_h / math.log(2) + 5
    log_value = math.log(inp.kappa / 6) + exponent * log_base
    value = math.exp(log_value) if log_value < LOG_LINEAR_LIMIT else None
    return LSConstantResult(log_base, exponent, log_value, value)


@dataclass(frozen=True)
class CorollaryExponent:
    log_base: float
    exponent: float


def corollary_exponent(family: str, d: int, rho: float, lam: float, K: float,
                       gamma: float = 1.0, sigma_min: float | None = None) -> CorollaryExponent:
    """Explicit exponent template ``(K^d / gamma)^exponent`` for the model families.

    ``family`` is one of ``pure-laplacian``, ``divergence``, ``harmonic-oscillator``.
    """
    lam = max(float(lam), 0.0)
    log_base = d * math.log(K) - math.log(gamma)
    if family == "pure-laplacian":
        exponent = K * d * rho * math.sqrt(lam) + 2 * d + 6
    elif family == "divergence":
        if sigma_min is None or sigma_min <= 0:
            raise ValueError("divergence family needs sigma_min > 0")
        exponent = K * d * rho * math.sqrt(lam / sigma_min) + 2 * d + 6
    elif family == "harmonic-oscillator":
        exponent = K * d * rho * math.sqrt(lam) + K**2 * d**2 * rho**2 + 2 * d + 10
    else:
        raise ValueError(f"unknown family {family!r}")
    return CorollaryExponent(log_base, exponent)


def fractional_lift(s: float, lam: float) -> float:
    """Spectral cap of the Laplacian carrying the subspace of its ``s``-th power."""
    if not s > 0:
        raise ValueError("s must be positive")
    return max(float(lam), 0.0) ** (1.0 / s)
