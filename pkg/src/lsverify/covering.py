"""Finite-overlap coverings of domains by elements containing a rho-cube.

A covering declares ``(kappa, rho, l, eta)``: pointwise multiplicity at most
``kappa``, every element contains a rho-cube and fits in a box with sides
``l``, and each element has a linear map ``psi`` with
``|psi(Q)| / diam(psi(Q))**d >= eta``.  Unbounded domains are covered lazily
inside a finite window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .errors import GeometryError, NoCubeFits, RhoMismatch, WindowRequired
from .geometry.domains import (Domain, EquilateralTriangle, GeneralizedRectangle, Product,
                               RightTriangle, Sector, tan_cot)
from .geometry.measure import require_cube
from .geometry.quadrature import DEFAULT_SPEC, QuadratureSpec
from .geometry.shapes import Box, Polygon, ProductShape, diameter, image_ratio, simplify

_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CoveringElement:
    shape: object
    bounding_l: np.ndarray
    cube_corner: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        for name in ("bounding_l", "cube_corner", "psi"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.shape.dim

    def eta(self) -> float:
        return image_ratio(self.shape, self.psi)

    def psi_diameter(self) -> float:
        return diameter(self.shape.vertices() @ self.psi.T)


@dataclass(frozen=True, eq=False)
class Covering:
    elements: tuple
    kappa: int
    rho: float
    l: np.ndarray
    eta: float
    domain: Domain | None = None
    window: Box | None = None

    def __post_init__(self):
        arr = np.array(self.l, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "l", arr)
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def dim(self) -> int:
        return self.l.size

    @property
    def params(self) -> tuple:
        return (self.kappa, self.rho, tuple(float(v) for v in self.l), self.eta)


@dataclass
class ElementCheck:
    index: int
    inside_ok: bool
    cube_ok: bool
    bbox_ok: bool
    eta_measured: float
    eta_ok: bool


@dataclass
class CoveringReport:
    uncovered_fraction: float
    max_overlap_measured: int
    per_element: list = field(default_factory=list)
    samples: int = 0
    passed: bool = False
    messages: list = field(default_factory=list)

    @property
    def pass_(self) -> bool:
        return self.passed


def _box_element(corner, sides) -> CoveringElement:
    corner = np.asarray(corner, dtype=float)
    sides = np.asarray(sides, dtype=float)
    return CoveringElement(Box(corner, sides), sides, corner, np.diag(1.0 / sides))


def _interval_covering(iv, rho: float, wlo: float | None, whi: float | None) -> tuple[list, int]:
    a, b = iv.lo, iv.hi
    if iv.bounded:
        if b - a < rho * (1 - _TOL):
            raise NoCubeFits(f"interval ({a}, {b}) is shorter than rho={rho}")
        n = math.ceil((b - a) / rho - 1e-9)
        starts = [a + i * rho for i in range(n - 1)] + [b - rho]
        return [_box_element([s], [rho]) for s in starts], 2
    if wlo is None:
        raise WindowRequired("an unbounded interval needs a window")
    if math.isfinite(a):
        i0 = max(0, math.floor((wlo - a) / rho))
        i1 = math.ceil((whi - a) / rho)
        starts = [a + i * rho for i in range(i0, max(i0 + 1, i1))]
    elif math.isfinite(b):
        i0 = max(0, math.floor((b - whi) / rho))
        i1 = math.ceil((b - wlo) / rho)
        starts = [b - (i + 1) * rho for i in range(i0, max(i0 + 1, i1))][::-1]
    else:
        i0, i1 = math.floor(wlo / rho), math.ceil(whi / rho)
        starts = [i * rho for i in range(i0, max(i0 + 1, i1))]
    return [_box_element([s], [rho]) for s in starts], 1


def _window_bounds(window, dims: slice | None = None):
    if window is None:
        return None, None
    lo, hi = window.corner, window.hi
    if dims is not None:
        lo, hi = lo[dims], hi[dims]
    return lo, hi


def _rectangle_covering(domain: GeneralizedRectangle, rho, window) -> Covering:
    if not domain.bounded and window is None:
        raise WindowRequired("an unbounded rectangle needs a window")
    wlo, whi = _window_bounds(window)
    factors = []
    for j, iv in enumerate(domain.intervals):
        elems, kappa = _interval_covering(iv, rho, None if wlo is None else wlo[j],
                                          None if whi is None else whi[j])
        factors.append(Covering(elems, kappa, rho, [rho], 1.0,
                                GeneralizedRectangle((iv,)),
                                None if window is None else Box([wlo[j]], [whi[j] - wlo[j]])))
    cov = factors[0]
    for f in factors[1:]:
        cov = product_covering(cov, f)
    return Covering(cov.elements, cov.kappa, cov.rho, cov.l, cov.eta, domain, window)


def _sector_cap(x0, y0, q, rho, cot, label="sector-cap"):
    return Polygon([[x0, y0], [x0 + q, y0], [x0 + q, y0 + rho], [x0 + rho * cot, y0 + rho]], label)


def _sector_covering(domain: Sector, rho, window) -> Covering:
    if window is None:
        raise WindowRequired("a sector is unbounded; pass a window")
    tan_t, cot = tan_cot(domain.n)
    q = rho * (1 + cot)
    (wx0, wy0), (wx1, wy1) = window.corner, window.hi
    elements = []
    k0 = max(0, math.floor(wy0 / rho))
    k1 = max(k0 + 1, math.ceil(wy1 / rho))
    psi_cap = np.diag([1 / q, 1 / rho])
    for k in range(k0, k1):
        y0 = k * rho
        x0 = y0 * cot
        if x0 >= wx1:
            break
        if x0 + q > wx0:
            elements.append(CoveringElement(_sector_cap(x0, y0, q, rho, cot), [q, rho],
                                            [x0 + rho * cot, y0], psi_cap))
        start = x0 + q
        i0 = max(0, math.floor((wx0 - start) / rho))
        i = i0
        while start + i * rho < wx1:
            elements.append(_box_element([start + i * rho, y0], [rho, rho]))
            i += 1
    return Covering(elements, 1, rho, [q, rho], 0.25, domain, window)


def _right_triangle_covering(domain: RightTriangle, rho) -> Covering:
    tan_t, cot = tan_cot(domain.n)
    q, p = rho * (1 + cot), rho * (1 + tan_t)
    L = domain.leg
    if L < q * (1 - _TOL):
        raise NoCubeFits(f"leg {L} is too short for rho={rho}")
    H = L * tan_t
    elements = []
    psi_cap = np.diag([1 / q, 1 / rho])
    rows = max(0, math.ceil((H - p) / rho - 1e-9))
    for k in range(rows):
        y0 = k * rho
        x0 = y0 * cot
        elements.append(CoveringElement(_sector_cap(x0, y0, q, rho, cot), [q, rho],
                                        [x0 + rho * cot, y0], psi_cap))
        w = L - x0 - q
        if w > _TOL * L:
            n = math.ceil(w / rho - 1e-9)
            starts = [x0 + q + i * rho for i in range(n - 1)] + [L - rho]
            elements.extend(_box_element([s, y0], [rho, rho]) for s in starts)
    top = Polygon([[L - q, H - p], [L, H - p], [L, H]], "triangle")
    elements.append(CoveringElement(top, [q, p], [L - rho, H - p], np.diag([1 / q, 1 / p])))
    return Covering(elements, 3, rho, [q, p], 0.25, domain, None)


EQUILATERAL_NARROW_FACTOR = math.sqrt(3.0)
EQUILATERAL_CUBE_FACTOR = 1.0 + 2.0 / math.sqrt(3.0)


def _equilateral_covering(domain: EquilateralTriangle, rho, narrow_tiles: bool) -> Covering:
    L = domain.side
    s_min = rho * (EQUILATERAL_NARROW_FACTOR if narrow_tiles else EQUILATERAL_CUBE_FACTOR)
    if L < s_min * (1 - 1e-9):
        raise NoCubeFits(f"side {L} is below the tile size {s_min:.6g} for rho={rho}")
    n = max(1, math.floor(L / s_min + 1e-9))
    t = L / n
    r3 = math.sqrt(3.0)
    A = np.array([L / 2, -r3 * L / 6])
    B = np.array([0.0, r3 * L / 3])
    C = np.array([-L / 2, -r3 * L / 6])
    e1, e2 = (A - C) / n, (B - C) / n

    def P(i, j):
        return C + i * e1 + j * e2

    elements = []
    bl = [t, r3 * t / 2]
    eye = np.eye(2)
    for i in range(n):
        for j in range(n - i):
            v0, v1, v2 = P(i, j), P(i + 1, j), P(i, j + 1)
            corner = [(v0[0] + v1[0]) / 2 - rho / 2, v0[1]]
            elements.append(CoveringElement(Polygon([v0, v1, v2], "triangle"), bl, corner, eye))
            if i + j <= n - 2:
                w0, w1, w2 = P(i + 1, j), P(i + 1, j + 1), P(i, j + 1)
                corner = [(w1[0] + w2[0]) / 2 - rho / 2, w1[1] - rho]
                elements.append(CoveringElement(Polygon([w0, w1, w2], "triangle"), bl, corner, eye))
    return Covering(elements, 3, rho, bl, r3 / 4, domain, None)


def build_covering(domain: Domain, rho: float, window: Box | None = None,
                   narrow_tiles: bool = False) -> Covering:
    """Construct the canonical covering of ``domain`` at scale ``rho``.

    ``window`` restricts unbounded domains to a finite box.  For equilateral
    triangles ``narrow_tiles=True`` uses tiles of side ``sqrt(3) rho``; these do
    not contain an axis-parallel rho-square, so the default uses the smallest
    side that does, ``(1 + 2/sqrt(3)) rho``.
    """
    if not rho > 0:
        raise GeometryError("rho must be positive")
    if window is not None and window.dim != domain.dim:
        raise GeometryError("window dimension does not match the domain")
    if isinstance(domain, GeneralizedRectangle):
        return _rectangle_covering(domain, rho, window)
    if isinstance(domain, Sector):
        require_cube(domain, rho)
        return _sector_covering(domain, rho, window)
    if isinstance(domain, RightTriangle):
        return _right_triangle_covering(domain, rho)
    if isinstance(domain, EquilateralTriangle):
        return _equilateral_covering(domain, rho, narrow_tiles)
    if isinstance(domain, Product):
        covs = []
        for f, s in zip(domain.factors(), domain.slices()):
            wf = None if window is None else Box(window.corner[s], window.sides[s])
            covs.append(build_covering(f, rho, wf, narrow_tiles))
        cov = covs[0]
        for c in covs[1:]:
            cov = product_covering(cov, c)
        return Covering(cov.elements, cov.kappa, cov.rho, cov.l, cov.eta, domain, window)
    raise GeometryError(f"unsupported domain {type(domain).__name__}")


def product_eta(eta1: float, d1: int, eta2: float, d2: int) -> float:
    """Lower bound on the image ratio of a product element."""
    log = (math.log(eta1) + math.log(eta2) + 0.5 * d2 * math.log(d2) + 0.5 * d1 * math.log(d1)
           - 0.5 * (d1 + d2) * math.log(d1 + d2))
    return math.exp(log)


def _combine_domains(a, b):
    if a is None or b is None:
        return None
    if isinstance(a, GeneralizedRectangle) and isinstance(b, GeneralizedRectangle):
        return GeneralizedRectangle(a.intervals + b.intervals)
    return Product((a, b))


def product_covering(cov1: Covering, cov2: Covering) -> Covering:
    """Cartesian product of two coverings sharing ``rho``."""
    if not math.isclose(cov1.rho, cov2.rho, rel_tol=1e-12):
        raise RhoMismatch(f"rho differs: {cov1.rho} vs {cov2.rho}")
    d1, d2 = cov1.dim, cov2.dim
    r = math.sqrt(d1 / d2)
    diam2 = [e.psi_diameter() for e in cov2.elements]
    elements = []
    for e1 in cov1.elements:
        diam1 = e1.psi_diameter()
        for e2, dm2 in zip(cov2.elements, diam2):
            psi = np.zeros((d1 + d2, d1 + d2))
            psi[:d1, :d1] = r * e1.psi / diam1
            psi[d1:, d1:] = e2.psi / dm2
            shape = simplify(ProductShape((e1.shape, e2.shape)))
            elements.append(CoveringElement(shape, np.concatenate([e1.bounding_l, e2.bounding_l]),
                                            np.concatenate([e1.cube_corner, e2.cube_corner]), psi))
    window = None
    if cov1.window is not None or cov2.window is not None:
        w1 = cov1.window or _bbox_box(cov1.domain)
        w2 = cov2.window or _bbox_box(cov2.domain)
        window = Box(np.concatenate([w1.corner, w2.corner]), np.concatenate([w1.sides, w2.sides]))
    return Covering(elements, cov1.kappa * cov2.kappa, cov1.rho,
                    np.concatenate([cov1.l, cov2.l]),
                    product_eta(cov1.eta, d1, cov2.eta, d2),
                    _combine_domains(cov1.domain, cov2.domain), window)


def _bbox_box(domain):
    lo, hi = domain.bbox()
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise WindowRequired("unbounded factor without a window")
    return Box.from_bounds(lo, hi)


def _sampling_box(cov: Covering) -> Box:
    if cov.domain is None:
        lo = np.min([e.shape.bbox()[0] for e in cov.elements], axis=0)
        hi = np.max([e.shape.bbox()[1] for e in cov.elements], axis=0)
        return Box.from_bounds(lo, hi)
    lo, hi = cov.domain.bbox()
    if cov.window is not None:
        lo, hi = np.maximum(lo, cov.window.corner), np.minimum(hi, cov.window.hi)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise WindowRequired("validation of an unbounded domain needs a window")
    return Box.from_bounds(lo, hi)


def _inside_domain(domain, shape) -> bool:
    if domain is None:
        return True
    verts = shape.vertices()
    if isinstance(domain, (GeneralizedRectangle,)):
        lo, hi = domain.bbox()
        tol = _TOL * (1 + np.abs(verts))
        return bool(np.all(verts >= lo - tol) and np.all(verts <= hi + tol))
    slices = domain.slices() if isinstance(domain, Product) else [slice(0, domain.dim)]
    factors = domain.factors()
    for f, s in zip(factors, slices):
        sub = np.unique(verts[:, s], axis=0)
        if isinstance(f, GeneralizedRectangle):
            lo, hi = f.bbox()
            tol = _TOL * (1 + np.abs(sub))
            if not (np.all(sub >= lo - tol) and np.all(sub <= hi + tol)):
                return False
        else:
            n, c = f.halfplanes()
            if not np.all(sub @ n.T <= c + 1e-10 * (1 + np.abs(c))):
                return False
    return True


def validate_covering(cov: Covering, spec: QuadratureSpec | None = None) -> CoveringReport:
    """Check the four covering properties; coverage and overlap by sampling."""
    spec = spec or DEFAULT_SPEC
    box = _sampling_box(cov)
    rng = np.random.default_rng(spec.seed)
    n = int(spec.mc_samples)
    counts = []
    chunk = 200_000
    bboxes = [e.shape.bbox() for e in cov.elements]
    for s in range(0, n, chunk):
        m = min(chunk, n - s)
        pts = box.corner + box.sides * rng.random((m, box.dim))
        if cov.domain is not None:
            pts = pts[cov.domain.contains(pts)]
        c = np.zeros(pts.shape[0], dtype=np.int32)
        for e, (lo, hi) in zip(cov.elements, bboxes):
            pre = np.all((pts > lo) & (pts < hi), axis=1)
            if pre.any():
                idx = np.flatnonzero(pre)
                c[idx] += e.shape.contains(pts[idx])
        counts.append(c)
    counts = np.concatenate(counts) if counts else np.zeros(0, dtype=np.int32)
    inside = counts.size
    uncovered = float(np.mean(counts == 0)) if inside else 1.0
    max_overlap = int(counts.max()) if inside else 0

    per = []
    msgs = []
    for k, e in enumerate(cov.elements):
        lo, hi = e.shape.bbox()
        ext = hi - lo
        bbox_ok = bool(np.all(ext <= cov.l * (1 + 1e-12) + _TOL)
                       and np.all(e.bounding_l <= cov.l * (1 + 1e-12) + _TOL)
                       and np.all(ext <= e.bounding_l * (1 + 1e-12) + _TOL))
        cube_ok = e.shape.contains_cube(e.cube_corner, cov.rho)
        eta_m = e.eta()
        eta_ok = eta_m >= cov.eta * (1 - 1e-12)
        inside_ok = _inside_domain(cov.domain, e.shape)
        per.append(ElementCheck(k, inside_ok, cube_ok, bbox_ok, eta_m, eta_ok))
    if uncovered > 1e-3:
        msgs.append(f"uncovered fraction {uncovered:.3g} exceeds 1e-3")
    if max_overlap > cov.kappa:
        msgs.append(f"measured overlap {max_overlap} exceeds kappa={cov.kappa}")
    for name in ("inside_ok", "cube_ok", "bbox_ok", "eta_ok"):
        bad = [c.index for c in per if not getattr(c, name)]
        if bad:
            msgs.append(f"{name} fails for {len(bad)} element(s), first {bad[0]}")
    passed = not msgs
    return CoveringReport(uncovered, max_overlap, per, inside, passed, msgs)
