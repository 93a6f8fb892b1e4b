"""Finite spectral subspaces: trigonometric eigenfunctions on rectangles and
Hermite functions on R^d.

Both bases are tensor products of one-dimensional families, so values and
derivatives of any finite combination reduce to per-axis tables contracted
against a dense coefficient array.  ``z`` may be complex, which the
local-estimate checks use for the analytic continuation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import product as iproduct
from typing import Sequence

import numpy as np

from .errors import EmptySpectrum, GeometryError
from .geometry.quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_many
from .geometry.shapes import Box

_EIG_RTOL = 1e-12


class BoundaryCondition(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class Mode:
    index: tuple
    eigenvalue: float


@dataclass(frozen=True, eq=False)
class RectangleTrig:
    """Eigenfunctions of ``-div(diag(scale) grad)`` on a box.

    Dirichlet uses ``sqrt(2/L) sin(pi k (x-a)/L)``, ``k >= 1``; Neumann uses
    ``1/sqrt(L)`` for ``k = 0`` and ``sqrt(2/L) cos(pi k (x-a)/L)`` otherwise.
    """

    box: Box
    bc: BoundaryCondition = BoundaryCondition.DIRICHLET
    scale: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))
        if np.any(self.box.sides <= 0):
            raise GeometryError("basis box must have positive sides")
        if self.scale is not None:
            sc = tuple(float(s) for s in self.scale)
            if len(sc) != self.box.dim or min(sc) <= 0:
                raise GeometryError("scale must be positive, one entry per axis")
            object.__setattr__(self, "scale", sc)

    @property
    def d(self) -> int:
        return self.box.dim

    @property
    def min_index(self) -> int:
        return 1 if self.bc is BoundaryCondition.DIRICHLET else 0

    def region(self) -> Box:
        return self.box

    def _freq(self, j: int, k) -> np.ndarray:
        return math.pi * np.asarray(k, dtype=float) / self.box.sides[j]

    def laplacian_eigenvalue(self, index) -> float:
        return float(sum(self._freq(j, k) ** 2 for j, k in enumerate(index)))

    def eigenvalue(self, index) -> float:
        sc = self.scale or (1.0,) * self.d
        return float(sum(s * self._freq(j, k) ** 2 for j, (s, k) in enumerate(zip(sc, index))))

    def axis_max(self, j: int, lam: float) -> int:
        s = (self.scale or (1.0,) * self.d)[j]
        return int(math.floor(self.box.sides[j] * math.sqrt(max(lam, 0.0) / s) / math.pi * (1 + 1e-12)))

    def axis_table(self, j: int, x: np.ndarray, a_max: int, kmax: int) -> np.ndarray:
        """``T[a, k, p] = d^a/dx^a phi_k(x_p)`` for ``a <= a_max``, ``k <= kmax``."""
        L = self.box.sides[j]
        k = np.arange(kmax + 1)
        w = math.pi * k / L
        theta = np.multiply.outer(w, np.asarray(x) - self.box.corner[j])
        s, c = np.sin(theta), np.cos(theta)
        norm = np.full(kmax + 1, math.sqrt(2.0 / L))
        dirichlet = self.bc is BoundaryCondition.DIRICHLET
        if not dirichlet:
            norm[0] = math.sqrt(1.0 / L)
        else:
            norm[0] = 0.0
        # shifting the phase by a*pi/2 cycles sin -> cos -> -sin -> -cos
        cyc = [s, c, -s, -c] if dirichlet else [c, -s, -c, s]
        out = np.empty((a_max + 1, kmax + 1) + np.shape(x), dtype=theta.dtype)
        for a in range(a_max + 1):
            out[a] = (norm * w**a)[:, None] * cyc[a % 4]
        return out


@dataclass(frozen=True)
class HermiteTensor:
    """Tensor Hermite functions on R^d, eigenvalue ``2|beta| + d``."""

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise GeometryError("dimension must be positive")

    min_index = 0
    scale = None

    def region(self):
        return None

    def eigenvalue(self, index) -> float:
        return float(2 * sum(index) + self.d)

    def axis_max(self, j: int, lam: float) -> int:
        return int(math.floor((lam - self.d) / 2 + 1e-12))

    def axis_table(self, j: int, x: np.ndarray, a_max: int, kmax: int) -> np.ndarray:
        top = kmax + a_max
        phi = hermite_functions(top, x)
        D = hermite_derivative_matrix(top)
        out = np.empty((a_max + 1, kmax + 1) + np.shape(x), dtype=phi.dtype)
        P = np.eye(top + 1)
        for a in range(a_max + 1):
            out[a] = P[: kmax + 1] @ phi
            P = P @ D
        return out


def hermite_functions(n: int, t) -> np.ndarray:
    """``phi_0 .. phi_n`` at ``t`` via the three-term recurrence; shape ``(n+1,) + t.shape``."""
    t = np.asarray(t)
    out = np.empty((n + 1,) + t.shape, dtype=np.result_type(t.dtype, float))
    out[0] = math.pi ** -0.25 * np.exp(-t * t / 2)
    if n >= 1:
        out[1] = math.sqrt(2.0) * t * out[0]
    for k in range(1, n):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * t * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_derivative_matrix(n: int) -> np.ndarray:
    """``D`` with ``phi_k' = sum_j D[k, j] phi_j`` on ``phi_0 .. phi_n``."""
    D = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        if k >= 1:
            D[k, k - 1] = math.sqrt(k / 2)
        if k + 1 <= n:
            D[k, k + 1] = -math.sqrt((k + 1) / 2)
    return D


Basis = "RectangleTrig | HermiteTensor"


def enumerate_modes(basis, lam: float) -> list[Mode]:
    """All modes with eigenvalue ``<= lam``, sorted by eigenvalue then index."""
    d = basis.d
    caps = [basis.axis_max(j, lam) for j in range(d)]
    lo = basis.min_index
    if any(c < lo for c in caps):
        raise EmptySpectrum(f"no eigenvalue below {lam}")
    modes = []
    limit = lam * (1 + _EIG_RTOL) + _EIG_RTOL
    for idx in iproduct(*[range(lo, c + 1) for c in caps]):
        ev = basis.eigenvalue(idx)
        if ev <= limit:
            modes.append(Mode(tuple(int(i) for i in idx), ev))
    if not modes:
        raise EmptySpectrum(f"no eigenvalue below {lam}")
    modes.sort(key=lambda m: (m.eigenvalue, m.index))
    return modes


def multi_indices(d: int, m: int) -> list[tuple]:
    """All ``alpha`` in N^d with ``|alpha| = m`` in lexicographic order."""
    if d == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        out.extend((first,) + rest for rest in multi_indices(d - 1, m - first))
    return out


def alpha_factorial(alpha) -> int:
    return math.prod(math.factorial(a) for a in alpha)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    basis: object
    terms: tuple
    lambda_cap: float

    def __post_init__(self):
        terms = tuple((m, complex(c)) for m, c in self.terms)
        object.__setattr__(self, "terms", terms)

    @property
    def d(self) -> int:
        return self.basis.d

    @cached_property
    def _dense(self):
        lo = self.basis.min_index
        kmax = [max(m.index[j] for m, _ in self.terms) for j in range(self.d)]
        C = np.zeros(tuple(k + 1 for k in kmax), dtype=complex)
        for m, c in self.terms:
            C[m.index] += c
        return C, kmax, lo

    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms])

    def norm_sq_exact(self) -> float:
        return float(np.sum(np.abs(self.coefficients()) ** 2))

    def derivatives(self, points, alphas: Sequence[tuple]) -> np.ndarray:
        """Values ``d^alpha f`` at ``points`` (shape ``(N, d)``); returns ``(len(alphas), N)``."""
        pts = np.atleast_2d(np.asarray(points))
        if pts.shape[1] != self.d:
            raise ValueError(f"points must have {self.d} columns")
        C, kmax, _ = self._dense
        amax = [max(a[j] for a in alphas) for j in range(self.d)]
        tables = [self.basis.axis_table(j, pts[:, j], amax[j], kmax[j]) for j in range(self.d)]
        dtype = np.result_type(C.dtype, *[t.dtype for t in tables])
        out = np.empty((len(alphas), pts.shape[0]), dtype=dtype)
        if self.d == 1:
            for i, a in enumerate(alphas):
                out[i] = C @ tables[0][a[0]]
            return out
        if self.d == 2:
            first = {}
            for i, a in enumerate(alphas):
                if a[0] not in first:
                    first[a[0]] = C.T @ tables[0][a[0]] if C.shape[0] else None
                out[i] = np.einsum("kp,kp->p", first[a[0]], tables[1][a[1]])
            return out
        for i, a in enumerate(alphas):
            args = [C, list(range(self.d))]
            for j in range(self.d):
                args.extend([tables[j][a[j]], [j, self.d]])
            out[i] = np.einsum(*args, [self.d], optimize=True)
        return out

    def grid_values(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """``f`` on the tensor grid ``axes[0] x ... x axes[d-1]`` (entries may be complex)."""
        C, kmax, _ = self._dense
        args = [C, list(range(self.d))]
        for j, ax in enumerate(axes):
            args.extend([self.basis.axis_table(j, np.asarray(ax), 0, kmax[j])[0], [j, self.d + j]])
        return np.einsum(*args, list(range(self.d, 2 * self.d)), optimize=True)

    def __call__(self, points, alpha=None):
        alpha = tuple(alpha) if alpha is not None else (0,) * self.d
        return self.derivatives(points, [alpha])[0]


def random_function(basis, lam: float, seed: int, coefficient_law: str = "complex-normal") -> SpectralFunction:
    """Random element of the spectral subspace, normalized to unit L2 norm."""
    modes = enumerate_modes(basis, lam)
    rng = np.random.default_rng(seed)
    n = len(modes)
    if coefficient_law == "complex-normal":
        c = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
    elif coefficient_law == "real-normal":
        c = rng.standard_normal(n).astype(complex)
    elif coefficient_law == "uniform-sphere":
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        raise ValueError(f"unknown coefficient law {coefficient_law!r}")
    c = c / np.linalg.norm(c)
    return SpectralFunction(basis, tuple(zip(modes, c)), float(lam))


def single_mode(basis, index, lam: float | None = None, coefficient: complex = 1.0) -> SpectralFunction:
    ev = basis.eigenvalue(index)
    return SpectralFunction(basis, ((Mode(tuple(index), ev), coefficient),), ev if lam is None else lam)


def evaluate(f: SpectralFunction, z, alpha=None):
    """``d^alpha f(z)`` for one point (``(d,)``) or many (``(N, d)``); ``z`` may be complex."""
    z = np.asarray(z)
    single = z.ndim == 1
    val = f(np.atleast_2d(z), alpha)
    return val[0] if single else val


def default_region(f: SpectralFunction) -> Box:
    """Integration box for the full domain; Hermite functions are truncated."""
    region = f.basis.region()
    if region is not None:
        return region
    top = max(sum(m.index) for m, _ in f.terms)
    T = math.sqrt(2 * top + 1) + 12.0
    return Box(np.full(f.d, -T), np.full(f.d, 2 * T))


def norm_sq(f: SpectralFunction, region=None, mask=None, spec: QuadratureSpec | None = None) -> float:
    """``||f||^2`` over ``region`` (optionally ``∩ mask``); exact when both are omitted."""
    if region is None and mask is None:
        return f.norm_sq_exact()
    region = region or default_region(f)
    return float(integrate_many([region], lambda x: np.abs(f(x)) ** 2, mask, spec or DEFAULT_SPEC)[0])
