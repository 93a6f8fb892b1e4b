"""Cube witnesses, thickness and exact intersection volumes."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, NoCubeFits
from .domains import (Domain, EquilateralTriangle, GeneralizedRectangle, Product,
                      RightTriangle, Sector, _PolygonalDomain, as_rectangle, tan_cot)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .shapes import Box, Polygon, ProductShape, clip_volume
from .thick import BoxUnion, FullSpace, PeriodicBoxUnion, ThickSet


@dataclass(frozen=True)
class ThicknessResult:
    gamma: float
    rho: float
    witness_x: tuple
    exact: bool = True

    @property
    def thick(self) -> bool:
        return self.gamma > 0


def _tup(x) -> tuple:
    return tuple(float(v) for v in x)


def cube_witness(domain: Domain, rho: float) -> np.ndarray | None:
    """Corner ``x`` with ``x + (0, rho)^d`` inside ``domain``, or None."""
    if not rho > 0:
        raise GeometryError("rho must be positive")
    x = _witness(domain, rho)
    if x is None or not domain.contains_cube(x, rho):
        return None
    return x


def require_cube(domain: Domain, rho: float) -> np.ndarray:
    x = cube_witness(domain, rho)
    if x is None:
        raise NoCubeFits(f"no cube of side {rho} fits into {domain}")
    return x


def _witness(domain, rho):
    if isinstance(domain, Product):
        parts = [_witness(f, rho) for f in domain.factors()]
        return None if any(p is None for p in parts) else np.concatenate(parts)
    if isinstance(domain, GeneralizedRectangle):
        x = []
        for iv in domain.intervals:
            if iv.length < rho * (1 - 1e-12):
                return None
            if math.isfinite(iv.lo):
                x.append(iv.lo)
            elif math.isfinite(iv.hi):
                x.append(iv.hi - rho)
            else:
                x.append(0.0)
        return np.array(x)
    if isinstance(domain, Sector):
        _, cot = tan_cot(domain.n)
        return np.array([rho * cot, 0.0])
    if isinstance(domain, EquilateralTriangle):
        return np.array([-rho / 2, -math.sqrt(3.0) * domain.side / 6])
    if isinstance(domain, RightTriangle):
        return np.array([domain.leg - rho, 0.0])
    raise GeometryError(f"unsupported domain {type(domain).__name__}")


def window_volume(cell_lo: np.ndarray, cell_hi: np.ndarray, x: np.ndarray, rho: float) -> np.ndarray:
    """``|omega ∩ (x + (0, rho)^d)|`` for disjoint cells and corners ``x`` of shape (N, d)."""
    x = np.atleast_2d(x)
    out = np.empty(x.shape[0])
    step = max(1, 4_000_000 // max(1, cell_lo.shape[0]))
    for s in range(0, x.shape[0], step):
        xs = x[s:s + step]
        prod = np.ones((xs.shape[0], cell_lo.shape[0]))
        for j in range(x.shape[1]):
            a = np.maximum(xs[:, j:j + 1], cell_lo[None, :, j])
            b = np.minimum(xs[:, j:j + 1] + rho, cell_hi[None, :, j])
            prod *= np.clip(b - a, 0.0, None)
        out[s:s + step] = prod.sum(axis=1)
    return out


def _breakpoints(cl, ch, rho, lo, hi, j):
    pts = np.concatenate([[lo, hi], cl[:, j] - rho, cl[:, j], ch[:, j] - rho, ch[:, j]])
    pts = pts[(pts >= lo) & (pts <= hi)]
    return np.unique(pts)


def _rect_ranges(domain: GeneralizedRectangle, omega: ThickSet, rho: float):
    lo, hi = [], []
    for j, iv in enumerate(domain.intervals):
        if iv.bounded:
            lo.append(iv.lo)
            hi.append(iv.hi - rho)
            continue
        if not isinstance(omega, PeriodicBoxUnion):
            raise GeometryError("a non-periodic set over an unbounded domain is not supported")
        p = omega.period[j]
        if math.isfinite(iv.lo):
            lo.append(iv.lo)
            hi.append(iv.lo + p)
        elif math.isfinite(iv.hi):
            lo.append(iv.hi - rho - p)
            hi.append(iv.hi - rho)
        else:
            lo.append(0.0)
            hi.append(p)
    return np.array(lo), np.array(hi)


def _min_on_grid(omega, rho, xlo, xhi):
    cl, ch = omega.cells_in(xlo, xhi + rho)
    d = xlo.size
    if cl.shape[0] == 0:
        return 0.0, xlo.copy()
    axes = [_breakpoints(cl, ch, rho, xlo[j], xhi[j], j) for j in range(d)]
    factors = []
    for j in range(d):
        b = axes[j][None, :]
        ov = np.minimum(b + rho, ch[:, j:j + 1]) - np.maximum(b, cl[:, j:j + 1])
        factors.append(np.clip(ov, 0.0, None))
    args = []
    for j, f in enumerate(factors):
        args.extend([f, [0, j + 1]])
    V = np.einsum(*args, list(range(1, d + 1)), optimize=True)
    idx = np.unravel_index(int(np.argmin(V)), V.shape)
    x = np.array([axes[j][idx[j]] for j in range(d)])
    return float(V[idx]) / rho**d, x


def _admissible_polygon(normals, offsets):
    """Vertices of ``{normals @ x <= offsets}`` (bounded, planar) or None."""
    pts = []
    k = normals.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            A = np.array([normals[i], normals[j]])
            if abs(np.linalg.det(A)) < 1e-14:
                continue
            x = np.linalg.solve(A, [offsets[i], offsets[j]])
            if np.all(normals @ x <= offsets + 1e-10 * (1 + np.abs(offsets))):
                pts.append(x)
    if not pts:
        return None
    pts = np.unique(np.round(np.array(pts), 14), axis=0)
    c = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0]))
    return pts[order]


def _min_on_polygon(omega, rho, verts):
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    cl, ch = omega.cells_in(lo, hi + rho)
    if cl.shape[0] == 0:
        return 0.0, verts[0].copy()
    axes = [_breakpoints(cl, ch, rho, lo[j], hi[j], j) for j in range(2)]
    cands = [verts]
    gx, gy = np.meshgrid(axes[0], axes[1], indexing="ij")
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    if verts.shape[0] >= 3:
        inside = Polygon(verts).contains(grid) if _area(verts) > 0 else np.zeros(len(grid), bool)
        cands.append(grid[inside])
    nv = verts.shape[0]
    for i in range(nv if nv > 2 else nv - 1):
        p, q = verts[i], verts[(i + 1) % nv]
        ts = [0.0, 1.0]
        for j in range(2):
            dq = q[j] - p[j]
            if abs(dq) > 1e-15:
                t = (axes[j] - p[j]) / dq
                ts.extend(t[(t > 0) & (t < 1)])
        ts = np.unique(ts)
        segs = p + ts[:, None] * (q - p)
        cands.append(segs)
        # V is quadratic between consecutive breakpoints along the edge
        for t0, t1 in zip(ts[:-1], ts[1:]):
            tt = np.array([t0, (t0 + t1) / 2, t1])
            vv = window_volume(cl, ch, p + tt[:, None] * (q - p), rho)
            curv = vv[0] - 2 * vv[1] + vv[2]
            if curv > 0:
                s = 0.5 - (vv[2] - vv[0]) / (4 * curv)
                if 0 < s < 1:
                    cands.append((p + (t0 + s * (t1 - t0)) * (q - p))[None, :])
    pts = np.concatenate(cands, axis=0)
    V = window_volume(cl, ch, pts, rho)
    i = int(np.argmin(V))
    return float(V[i]) / rho**2, pts[i]


def _area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def thickness_of(omega: ThickSet, domain: Domain, rho: float,
                 spec: QuadratureSpec | None = None) -> ThicknessResult:
    """Infimum of ``|omega ∩ (x + (0,rho)^d)| / rho^d`` over cubes inside ``domain``.

    Exact for rectangles, triangles and sectors (periodic sets); products of
    non-rectangular factors fall back to sampling and report ``exact=False``.
    """
    spec = spec or DEFAULT_SPEC
    witness = require_cube(domain, rho)
    if omega.dim is not None and omega.dim != domain.dim:
        raise GeometryError("set and domain dimensions differ")
    if isinstance(omega, FullSpace):
        return ThicknessResult(1.0, rho, _tup(witness))
    rect = as_rectangle(domain)
    if rect is not None:
        xlo, xhi = _rect_ranges(rect, omega, rho)
        g, x = _min_on_grid(omega, rho, xlo, xhi)
        return ThicknessResult(g, rho, _tup(x))
    if isinstance(domain, Sector):
        if not isinstance(omega, PeriodicBoxUnion):
            raise GeometryError("a non-periodic set over a sector is not supported")
        ref = omega._lo.min(axis=0)
        g, x = _min_on_grid(omega, rho, ref, ref + omega.period)
        return ThicknessResult(g, rho, _tup(_sector_representative(domain, omega.period, x, rho)))
    if isinstance(domain, (EquilateralTriangle, RightTriangle)):
        n, c = domain.admissible_halfplanes(rho)
        verts = _admissible_polygon(n, c)
        g, x = _min_on_polygon(omega, rho, verts)
        return ThicknessResult(g, rho, _tup(x))
    return _thickness_sampled(omega, domain, rho, spec)


def _sector_representative(domain, period, x, rho):
    t, cot = tan_cot(domain.n)
    x = np.array(x, dtype=float)
    x[1] += math.ceil(max(0.0, -x[1]) / period[1]) * period[1]
    need = (x[1] + rho) * cot
    x[0] += math.ceil(max(0.0, need - x[0]) / period[0]) * period[0]
    return x


def _sample_corners(factor, omega, rho, rng, n):
    if isinstance(factor, GeneralizedRectangle):
        lo, hi = _rect_ranges(factor, omega, rho) if not factor.bounded else (
            factor.bbox()[0], factor.bbox()[1] - rho)
        return lo + (hi - lo) * rng.random((n, factor.dim))
    if isinstance(factor, _PolygonalDomain):
        nrm, off = factor.admissible_halfplanes(rho)
        if isinstance(factor, Sector):
            if not isinstance(omega, PeriodicBoxUnion):
                raise GeometryError("a non-periodic set over a sector is not supported")
            span = float(omega.period.max()) + rho
            _, cot = tan_cot(factor.n)
            verts = np.array([[rho * cot, 0.0], [rho * cot + 4 * span * (1 + cot), 0.0],
                              [rho * cot + 4 * span * (1 + cot), 4 * span]])
        else:
            verts = _admissible_polygon(nrm, off)
        lo, hi = verts.min(axis=0), verts.max(axis=0)
        out = np.empty((0, 2))
        while out.shape[0] < n:
            cand = lo + (hi - lo) * rng.random((4 * n, 2))
            cand = cand[np.all(cand @ nrm.T <= off, axis=1)]
            out = np.vstack([out, cand])
        return out[:n]
    raise GeometryError(f"unsupported factor {type(factor).__name__}")


def _thickness_sampled(omega, domain, rho, spec):
    if not isinstance(domain, Product):
        raise GeometryError(f"unsupported domain {type(domain).__name__}")
    if isinstance(omega, BoxUnion) and not domain.bounded:
        raise GeometryError("a non-periodic set over an unbounded domain is not supported")
    rng = np.random.default_rng(spec.seed)
    n = max(1000, min(spec.mc_samples // 50, 20000))
    x = np.hstack([_sample_corners(f, omega, rho, rng, n) for f in domain.factors()])
    cl, ch = omega.cells_in(x.min(axis=0), x.max(axis=0) + rho)
    V = window_volume(cl, ch, x, rho) if cl.shape[0] else np.zeros(n)
    i = int(np.argmin(V))
    return ThicknessResult(float(V[i]) / rho**domain.dim, rho, _tup(x[i]), exact=False)


def intersect_volume(omega: ThickSet, region, spec: QuadratureSpec | None = None) -> float:
    """Exact ``|omega ∩ region|`` for boxes, polygons and their products."""
    if isinstance(omega, FullSpace):
        return region.volume()
    lo, hi = region.bbox()
    cl, ch = omega.cells_in(lo, hi)
    if cl.shape[0] == 0:
        return 0.0
    if isinstance(region, Box):
        ov = np.clip(np.minimum(ch, region.hi) - np.maximum(cl, region.corner), 0.0, None)
        return float(np.prod(ov, axis=1).sum())
    return float(sum(clip_volume(region, a, b) for a, b in zip(cl, ch)))
