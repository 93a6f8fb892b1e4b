"""Open domains: generalized rectangles, sectors, triangles and products."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError
from .shapes import Box, Polygon

_TOL = 1e-12


def tan_cot(n: int) -> tuple[float, float]:
    """``(tan(pi/n), cot(pi/n))`` with exact values for the common angles."""
    exact = {3: (math.sqrt(3.0), 1.0 / math.sqrt(3.0)), 4: (1.0, 1.0),
             6: (1.0 / math.sqrt(3.0), math.sqrt(3.0))}
    if n in exact:
        return exact[n]
    t = math.tan(math.pi / n)
    return t, 1.0 / t


@dataclass(frozen=True)
class ExtendedInterval:
    """Open interval ``(lo, hi)``; either end may be infinite."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise GeometryError(f"interval needs lo < hi, got ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo


class Domain:
    """Common interface. Subclasses are frozen dataclasses."""

    dim: int

    @property
    def bounded(self) -> bool:
        raise NotImplementedError

    def bbox(self):
        raise NotImplementedError

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains_cube(self, corner, rho: float) -> bool:
        raise NotImplementedError

    def factors(self) -> tuple:
        return (self,)

    def volume(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class GeneralizedRectangle(Domain):
    intervals: tuple

    def __post_init__(self):
        ivs = tuple(iv if isinstance(iv, ExtendedInterval) else ExtendedInterval(*iv)
                    for iv in self.intervals)
        if not ivs:
            raise GeometryError("a rectangle needs at least one interval")
        object.__setattr__(self, "intervals", ivs)

    @property
    def dim(self) -> int:
        return len(self.intervals)

    @property
    def bounded(self) -> bool:
        return all(iv.bounded for iv in self.intervals)

    def bbox(self):
        return (np.array([iv.lo for iv in self.intervals]),
                np.array([iv.hi for iv in self.intervals]))

    def as_box(self) -> Box:
        if not self.bounded:
            raise GeometryError("unbounded rectangle has no finite box")
        lo, hi = self.bbox()
        return Box.from_bounds(lo, hi)

    def contains(self, points):
        p = np.atleast_2d(points)
        lo, hi = self.bbox()
        return np.all((p > lo) & (p < hi), axis=1)

    def contains_cube(self, corner, rho):
        x = np.asarray(corner, dtype=float)
        lo, hi = self.bbox()
        tol = _TOL * (1.0 + np.abs(x) + rho)
        return bool(np.all(x >= lo - tol) and np.all(x + rho <= hi + tol))

    def volume(self) -> float:
        return float(np.prod([iv.length for iv in self.intervals]))


class _PolygonalDomain(Domain):
    dim = 2

    def halfplanes(self):
        raise NotImplementedError

    def contains(self, points):
        p = np.atleast_2d(points)
        n, c = self.halfplanes()
        return np.all(p @ n.T < c, axis=1)

    def contains_cube(self, corner, rho):
        x = np.asarray(corner, dtype=float)
        n, c = self.halfplanes()
        cube = x + rho * np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
        tol = _TOL * (1.0 + np.abs(c) + np.abs(x).sum() + rho)
        return bool(np.all(cube @ n.T <= c + tol))

    def admissible_halfplanes(self, rho: float):
        """Half-planes describing corners ``x`` whose rho-cube fits inside."""
        n, c = self.halfplanes()
        support = rho * np.clip(n, 0, None).sum(axis=1)
        return n, c - support


@dataclass(frozen=True)
class Sector(_PolygonalDomain):
    """``{0 < x2 < x1 tan(pi/n)}``."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise GeometryError("sector needs an integer n >= 2")
        object.__setattr__(self, "n", int(self.n))

    @property
    def theta(self) -> float:
        return math.pi / self.n

    @property
    def bounded(self):
        return False

    def bbox(self):
        return np.array([0.0, 0.0]), np.array([math.inf, math.inf])

    def halfplanes(self):
        t, _ = tan_cot(self.n)
        return np.array([[0.0, -1.0], [-t, 1.0]]), np.array([0.0, 0.0])

    def volume(self):
        return math.inf


@dataclass(frozen=True)
class EquilateralTriangle(_PolygonalDomain):
    """Vertices ``(L/2, -sqrt3 L/6)``, ``(0, sqrt3 L/3)``, ``(-L/2, -sqrt3 L/6)``."""

    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise GeometryError("triangle side must be positive")
        object.__setattr__(self, "side", float(self.side))

    @property
    def bounded(self):
        return True

    def polygon(self) -> Polygon:
        L, r3 = self.side, math.sqrt(3.0)
        return Polygon([[L / 2, -r3 * L / 6], [0.0, r3 * L / 3], [-L / 2, -r3 * L / 6]], "triangle")

    def bbox(self):
        return self.polygon().bbox()

    def halfplanes(self):
        return self.polygon().halfplanes()

    def volume(self):
        return math.sqrt(3.0) / 4 * self.side**2


@dataclass(frozen=True)
class RightTriangle(_PolygonalDomain):
    """``S_theta`` cut by ``x1 < leg`` with ``theta = pi/n``, ``n`` in {3, 4}."""

    n: int
    leg: float

    def __post_init__(self):
        if self.n not in (3, 4):
            raise GeometryError("right triangle angle must be pi/4 or pi/3")
        if not self.leg > 0:
            raise GeometryError("leg must be positive")
        object.__setattr__(self, "leg", float(self.leg))

    @classmethod
    def from_angle(cls, angle: float, leg: float) -> "RightTriangle":
        for n in (3, 4):
            if abs(angle - math.pi / n) < 1e-9:
                return cls(n, leg)
        raise GeometryError(f"angle {angle} is neither pi/4 nor pi/3")

    @property
    def theta(self) -> float:
        return math.pi / self.n

    @property
    def bounded(self):
        return True

    def polygon(self) -> Polygon:
        t, _ = tan_cot(self.n)
        L = self.leg
        return Polygon([[0.0, 0.0], [L, 0.0], [L, L * t]], "triangle")

    def bbox(self):
        return self.polygon().bbox()

    def halfplanes(self):
        return self.polygon().halfplanes()

    def volume(self):
        return self.polygon().volume()


@dataclass(frozen=True)
class Product(Domain):
    """Cartesian product; nested products are flattened."""

    factors_: tuple

    def __post_init__(self):
        flat = []
        for f in self.factors_:
            flat.extend(f.factors() if isinstance(f, Product) else [f])
        if not flat:
            raise GeometryError("empty product")
        object.__setattr__(self, "factors_", tuple(flat))

    def factors(self):
        return self.factors_

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors_)

    def slices(self):
        out, start = [], 0
        for f in self.factors_:
            out.append(slice(start, start + f.dim))
            start += f.dim
        return out

    @property
    def bounded(self):
        return all(f.bounded for f in self.factors_)

    def bbox(self):
        los, his = zip(*(f.bbox() for f in self.factors_))
        return np.concatenate(los), np.concatenate(his)

    def contains(self, points):
        p = np.atleast_2d(points)
        ok = np.ones(p.shape[0], dtype=bool)
        for f, s in zip(self.factors_, self.slices()):
            ok &= f.contains(p[:, s])
        return ok

    def contains_cube(self, corner, rho):
        x = np.asarray(corner, dtype=float)
        return all(f.contains_cube(x[s], rho) for f, s in zip(self.factors_, self.slices()))

    def volume(self):
        return float(np.prod([f.volume() for f in self.factors_]))


def as_rectangle(domain: Domain) -> GeneralizedRectangle | None:
    """Return an equivalent rectangle when every factor is one."""
    if isinstance(domain, GeneralizedRectangle):
        return domain
    if isinstance(domain, Product) and all(isinstance(f, GeneralizedRectangle) for f in domain.factors()):
        return GeneralizedRectangle(tuple(iv for f in domain.factors() for iv in f.intervals))
    return None
