"""Bounded convex shapes: axis-parallel boxes, convex polygons and products.

Each shape exposes the same small protocol (``dim``, ``volume``,
``vertices``, ``bbox``, ``contains``, ``contains_cube``) so coverings,
quadrature and validation can treat them uniformly.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Sequence

import numpy as np

_TOL = 1e-12


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-parallel box ``corner + (0, sides)``."""

    corner: np.ndarray
    sides: np.ndarray

    def __post_init__(self):
        c = _frozen_array(self.corner, 1)
        s = _frozen_array(self.sides, 1)
        if c.shape != s.shape:
            raise ValueError("corner and sides must have equal length")
        if np.any(s < 0) or not np.all(np.isfinite(s)):
            raise ValueError("box sides must be finite and non-negative")
        object.__setattr__(self, "corner", c)
        object.__setattr__(self, "sides", s)

    @classmethod
    def from_bounds(cls, lo, hi) -> "Box":
        lo = np.asarray(lo, dtype=float)
        return cls(lo, np.asarray(hi, dtype=float) - lo)

    @property
    def dim(self) -> int:
        return self.corner.size

    @property
    def hi(self) -> np.ndarray:
        return self.corner + self.sides

    def volume(self) -> float:
        return float(np.prod(self.sides))

    def bbox(self):
        return self.corner.copy(), self.hi

    def vertices(self) -> np.ndarray:
        corners = np.array(list(iproduct((0.0, 1.0), repeat=self.dim)))
        return self.corner + corners * self.sides

    def contains(self, points: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(points)
        return np.all((p > self.corner) & (p < self.hi), axis=1)

    def contains_cube(self, corner, rho: float) -> bool:
        x = np.asarray(corner, dtype=float)
        tol = _TOL * (1.0 + np.abs(x) + rho)
        return bool(np.all(x >= self.corner - tol) and np.all(x + rho <= self.hi + tol))

    def __repr__(self) -> str:
        return f"Box(corner={self.corner.tolist()}, sides={self.sides.tolist()})"


@dataclass(frozen=True, eq=False)
class Polygon:
    """Convex polygon in the plane with counter-clockwise vertices.

    ``label`` records how the piece arose (``"triangle"``, ``"sector-cap"``).
    """

    vertices_ccw: np.ndarray
    label: str = "polygon"

    def __post_init__(self):
        v = np.array(self.vertices_ccw, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("polygon needs at least three planar vertices")
        if _signed_area(v) < 0:
            v = v[::-1].copy()
        v.setflags(write=False)
        object.__setattr__(self, "vertices_ccw", v)

    dim = 2

    def volume(self) -> float:
        return abs(_signed_area(self.vertices_ccw))

    def vertices(self) -> np.ndarray:
        return self.vertices_ccw.copy()

    def bbox(self):
        return self.vertices_ccw.min(axis=0), self.vertices_ccw.max(axis=0)

    def halfplanes(self):
        """Return ``(normals, offsets)`` with interior ``normals @ x < offsets``."""
        v = self.vertices_ccw
        e = np.roll(v, -1, axis=0) - v
        normals = np.column_stack([e[:, 1], -e[:, 0]])
        offsets = np.einsum("ij,ij->i", normals, v)
        return normals, offsets

    def contains(self, points: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(points)
        n, c = self.halfplanes()
        return np.all(p @ n.T < c, axis=1)

    def contains_cube(self, corner, rho: float) -> bool:
        x = np.asarray(corner, dtype=float)
        n, c = self.halfplanes()
        cube = x + rho * np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
        scale = _TOL * (1.0 + np.abs(c) + np.linalg.norm(n, axis=1) * (np.abs(x).sum() + rho))
        return bool(np.all(cube @ n.T <= c + scale))

    def clip_box(self, lo, hi) -> "Polygon | None":
        """Intersection with the box ``[lo, hi]`` or ``None`` when degenerate."""
        pts = [tuple(p) for p in self.vertices_ccw]
        for axis in (0, 1):
            pts = _clip(pts, axis, lo[axis], +1)
            pts = _clip(pts, axis, hi[axis], -1)
            if len(pts) < 3:
                return None
        arr = _dedupe(np.array(pts))
        if arr.shape[0] < 3 or abs(_signed_area(arr)) <= 1e-300:
            return None
        return Polygon(arr, self.label)

    def triangles(self) -> np.ndarray:
        """Fan triangulation, shape ``(k-2, 3, 2)``."""
        v = self.vertices_ccw
        return np.stack([np.stack([v[0], v[i], v[i + 1]]) for i in range(1, v.shape[0] - 1)])

    def __repr__(self) -> str:
        return f"Polygon({self.vertices_ccw.tolist()}, label={self.label!r})"


@dataclass(frozen=True)
class ProductShape:
    """Cartesian product of shapes; coordinates are concatenated in order."""

    factors: tuple

    def __post_init__(self):
        flat = []
        for f in self.factors:
            flat.extend(f.factors if isinstance(f, ProductShape) else [f])
        object.__setattr__(self, "factors", tuple(flat))

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    def slices(self):
        out, start = [], 0
        for f in self.factors:
            out.append(slice(start, start + f.dim))
            start += f.dim
        return out

    def volume(self) -> float:
        return float(np.prod([f.volume() for f in self.factors]))

    def vertices(self) -> np.ndarray:
        parts = [f.vertices() for f in self.factors]
        return np.array([np.concatenate(c) for c in iproduct(*parts)])

    def bbox(self):
        los, his = zip(*(f.bbox() for f in self.factors))
        return np.concatenate(los), np.concatenate(his)

    def contains(self, points: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(points)
        ok = np.ones(p.shape[0], dtype=bool)
        for f, s in zip(self.factors, self.slices()):
            ok &= f.contains(p[:, s])
        return ok

    def contains_cube(self, corner, rho: float) -> bool:
        x = np.asarray(corner, dtype=float)
        return all(f.contains_cube(x[s], rho) for f, s in zip(self.factors, self.slices()))


Shape = "Box | Polygon | ProductShape"


def simplify(shape):
    """Collapse products made only of boxes into a single box."""
    if isinstance(shape, ProductShape):
        if all(isinstance(f, Box) for f in shape.factors):
            return Box(np.concatenate([f.corner for f in shape.factors]),
                       np.concatenate([f.sides for f in shape.factors]))
        if len(shape.factors) == 1:
            return shape.factors[0]
    return shape


def diameter(points: np.ndarray) -> float:
    """Largest pairwise distance among ``points``."""
    p = np.atleast_2d(points)
    diff = p[:, None, :] - p[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))


def image_ratio(shape, psi: np.ndarray) -> float:
    """``|psi(Q)| / diam(psi(Q))**d`` for a convex shape and linear ``psi``."""
    psi = np.asarray(psi, dtype=float)
    d = shape.dim
    vol = abs(np.linalg.det(psi)) * shape.volume()
    diam = diameter(shape.vertices() @ psi.T)
    return vol / diam**d


def clip_volume(shape, lo, hi) -> float:
    """Exact volume of ``shape`` intersected with the box ``[lo, hi]``."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if isinstance(shape, Box):
        return float(np.prod(np.clip(np.minimum(shape.hi, hi) - np.maximum(shape.corner, lo), 0, None)))
    if isinstance(shape, Polygon):
        clipped = shape.clip_box(lo, hi)
        return 0.0 if clipped is None else clipped.volume()
    if isinstance(shape, ProductShape):
        vol = 1.0
        for f, s in zip(shape.factors, shape.slices()):
            vol *= clip_volume(f, lo[s], hi[s])
            if vol == 0.0:
                break
        return vol
    raise TypeError(f"unsupported shape {type(shape).__name__}")


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _clip(pts: Sequence[tuple], axis: int, bound: float, sign: int):
    # Sutherland-Hodgman against the half-plane sign*(p[axis]-bound) >= 0
    out = []
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        fp = sign * (p[axis] - bound)
        fq = sign * (q[axis] - bound)
        if fp >= 0:
            out.append(p)
        if (fp >= 0) != (fq >= 0):
            t = fp / (fp - fq)
            out.append(tuple(p[k] + t * (q[k] - p[k]) for k in range(2)))
    return out


def _dedupe(arr: np.ndarray) -> np.ndarray:
    keep = [0]
    for i in range(1, arr.shape[0]):
        if np.max(np.abs(arr[i] - arr[keep[-1]])) > 1e-15:
            keep.append(i)
    if len(keep) > 1 and np.max(np.abs(arr[keep[-1]] - arr[keep[0]])) <= 1e-15:
        keep.pop()
    return arr[keep]
