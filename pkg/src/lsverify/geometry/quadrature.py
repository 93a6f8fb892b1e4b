"""Adaptive tensor-product Gauss-Legendre quadrature.

Regions are boxes, convex polygons or products of those.  A region is cut
exactly along the cells of a box-union mask, split into pieces whose factors
are boxes or triangles, and integrated with a tensor rule (triangles use the
collapsed-square map).  A piece is accepted when the rule on the piece and
the sum over its children agree to the requested tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Sequence

import numpy as np

from ..errors import ToleranceNotReached
from .shapes import Box, Polygon, ProductShape
from .thick import FullSpace, ThickSet

_MAX_POINTS = 1 << 19


@dataclass(frozen=True)
class QuadratureSpec:
    rule_order: int = 16
    base_subdivision: float = 4.0
    rel_tol: float = 1e-8
    max_depth: int = 12
    mc_samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if self.rule_order < 2 or self.max_depth < 0 or self.base_subdivision <= 0 or self.mc_samples < 1:
            raise ValueError("invalid quadrature parameters")
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=64)
def _gl01(n: int):
    t, w = np.polynomial.legendre.leggauss(n)
    return (t + 1) / 2, w / 2


@lru_cache(maxsize=64)
def _ref_rule(kind: str, k: int, n: int):
    x, w = _gl01(n)
    dims = k if kind == "box" else 2
    pts = np.array(list(iproduct(x, repeat=dims)))
    wts = np.prod(np.array(list(iproduct(w, repeat=dims))), axis=1)
    pts.setflags(write=False)
    wts.setflags(write=False)
    return pts, wts


class _Batch:
    """Pieces sharing one factor signature, stored as stacked arrays."""

    def __init__(self, sig, arrays, owner):
        self.sig = sig
        self.arrays = arrays
        self.owner = owner

    @property
    def size(self) -> int:
        return self.owner.size

    def measure(self) -> np.ndarray:
        m = np.ones(self.size)
        for (kind, _), arr in zip(self.sig, self.arrays):
            if kind == "box":
                m = m * np.prod(arr[1] - arr[0], axis=1)
            else:
                m = m * _tri_area(arr)
        return m

    def take(self, idx) -> "_Batch":
        arrays = [(a[0][idx], a[1][idx]) if kind == "box" else a[idx]
                  for (kind, _), a in zip(self.sig, self.arrays)]
        return _Batch(self.sig, arrays, self.owner[idx])

    def rule(self, n: int):
        xs, ws = [], []
        for (kind, k), arr in zip(self.sig, self.arrays):
            ref, rw = _ref_rule(kind, k, n)
            if kind == "box":
                lo, hi = arr
                span = hi - lo
                xs.append(lo[:, None, :] + span[:, None, :] * ref[None, :, :])
                ws.append(np.prod(span, axis=1)[:, None] * rw[None, :])
            else:
                v0, v1, v2 = arr[:, 0], arr[:, 1], arr[:, 2]
                u, s = ref[:, 0], ref[:, 1]
                x = (v0[:, None, :] + u[None, :, None] * (v1 - v0)[:, None, :]
                     + (u * s)[None, :, None] * (v2 - v1)[:, None, :])
                xs.append(x)
                ws.append(2 * _tri_area(arr)[:, None] * (u * rw)[None, :])
        return _tensor_combine(xs, ws)

    def children(self):
        """Children batch and the index of each child's parent."""
        parts = []
        for (kind, k), arr in zip(self.sig, self.arrays):
            parts.append(_box_children(*arr) if kind == "box" else _tri_children(arr))
        counts = [p[1] for p in parts]
        total = int(np.prod(counts))
        M = self.size
        arrays = []
        grids = np.array(list(iproduct(*[range(c) for c in counts])), dtype=int)
        for f, ((kind, _), (child, c)) in enumerate(zip(self.sig, parts)):
            sel = grids[:, f]
            if kind == "box":
                lo, hi = child
                arrays.append((lo[:, sel].reshape(M * total, -1), hi[:, sel].reshape(M * total, -1)))
            else:
                arrays.append(child[:, sel].reshape(M * total, 3, 2))
        parent = np.repeat(np.arange(M), total)
        return _Batch(self.sig, arrays, self.owner[parent]), parent


def _tensor_combine(xs, ws):
    M = xs[0].shape[0]
    if len(xs) == 1:
        return xs[0], ws[0]
    sizes = [x.shape[1] for x in xs]
    R = int(np.prod(sizes))
    cols, W = [], np.ones((M,) + tuple(sizes))
    for f, (x, w) in enumerate(zip(xs, ws)):
        shape = [M] + [1] * len(xs)
        shape[f + 1] = sizes[f]
        W = W * w.reshape(shape)
        xf = x.reshape(shape + [x.shape[2]])
        cols.append(np.broadcast_to(xf, (M,) + tuple(sizes) + (x.shape[2],)))
    X = np.concatenate(cols, axis=-1).reshape(M, R, -1)
    return X, W.reshape(M, R)


def _box_children(lo, hi):
    M, k = lo.shape
    mid = (lo + hi) / 2
    bits = np.array(list(iproduct((0, 1), repeat=k)), dtype=bool)
    clo = np.where(bits[None], mid[:, None, :], lo[:, None, :])
    chi = np.where(bits[None], hi[:, None, :], mid[:, None, :])
    return (clo, chi), bits.shape[0]


def _tri_children(V):
    v0, v1, v2 = V[:, 0], V[:, 1], V[:, 2]
    m01, m12, m20 = (v0 + v1) / 2, (v1 + v2) / 2, (v2 + v0) / 2
    kids = np.stack([np.stack([v0, m01, m20], 1), np.stack([m01, v1, m12], 1),
                     np.stack([m20, m12, v2], 1), np.stack([m01, m12, m20], 1)], axis=1)
    return kids, 4


def _tri_area(V):
    a = V[:, 1] - V[:, 0]
    b = V[:, 2] - V[:, 0]
    return 0.5 * np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])


def _factor_pieces(shape, lo=None, hi=None):
    """Exact decomposition of ``shape`` (clipped to ``[lo, hi]``) into factor tuples."""
    if isinstance(shape, Box):
        a, b = shape.corner, shape.hi
        if lo is not None:
            a, b = np.maximum(a, lo), np.minimum(b, hi)
            if np.any(b <= a):
                return []
        return [(("box", a, b),)]
    if isinstance(shape, Polygon):
        poly = shape if lo is None else shape.clip_box(lo, hi)
        if poly is None:
            return []
        return [(("tri", t),) for t in poly.triangles()]
    if isinstance(shape, ProductShape):
        options = []
        for f, s in zip(shape.factors, shape.slices()):
            opts = _factor_pieces(f, None if lo is None else lo[s], None if hi is None else hi[s])
            if not opts:
                return []
            options.append(opts)
        return [sum(combo, ()) for combo in iproduct(*options)]
    raise TypeError(f"cannot integrate over {type(shape).__name__}")


def _subdivide(factor, base: float):
    kind = factor[0]
    if kind == "box":
        a, b = factor[1], factor[2]
        counts = [max(1, math.ceil(base * (bj - aj) - 1e-9)) for aj, bj in zip(a, b)]
        axes = [np.linspace(aj, bj, c + 1) for aj, bj, c in zip(a, b, counts)]
        out = []
        for idx in iproduct(*[range(c) for c in counts]):
            out.append(("box", np.array([ax[i] for ax, i in zip(axes, idx)]),
                        np.array([ax[i + 1] for ax, i in zip(axes, idx)])))
        return out
    V = factor[1][None]
    diam = max(np.linalg.norm(factor[1][i] - factor[1][j]) for i in range(3) for j in range(i))
    levels = max(0, math.ceil(math.log2(max(diam * base, 1.0))))
    for _ in range(levels):
        V = _tri_children(V)[0].reshape(-1, 3, 2)
    return [("tri", v) for v in V]


def _build_batches(regions: Sequence, mask: ThickSet | None, spec: QuadratureSpec):
    groups: dict = {}
    for owner, region in enumerate(regions):
        if mask is None or isinstance(mask, FullSpace):
            pieces = _factor_pieces(region)
        else:
            rlo, rhi = region.bbox()
            clo, chi = mask.cells_in(rlo, rhi)
            pieces = [p for a, b in zip(clo, chi) for p in _factor_pieces(region, a, b)]
        for piece in pieces:
            for combo in iproduct(*[_subdivide(f, spec.base_subdivision) for f in piece]):
                sig = tuple((f[0], f[1].shape[-1] if f[0] == "box" else 2) for f in combo)
                groups.setdefault(sig, []).append((owner, combo))
    batches = []
    for sig, items in groups.items():
        owner = np.array([o for o, _ in items], dtype=int)
        arrays = []
        for f, (kind, _) in enumerate(sig):
            if kind == "box":
                arrays.append((np.array([c[f][1] for _, c in items]), np.array([c[f][2] for _, c in items])))
            else:
                arrays.append(np.array([c[f][1] for _, c in items]))
        batches.append(_Batch(sig, arrays, owner))
    return batches


def _eval_batch(batch: _Batch, integrand, n: int):
    if batch.size == 0:
        return None
    out = []
    R = int(np.prod([_ref_rule(k, d, n)[1].size for k, d in batch.sig]))
    step = max(1, _MAX_POINTS // R)
    for start in range(0, batch.size, step):
        sub = batch.take(slice(start, start + step))
        X, W = sub.rule(n)
        M, R, d = X.shape
        vals = np.asarray(integrand(X.reshape(M * R, d)))
        vals = vals.reshape(M, R, -1)
        out.append(np.einsum("mr,mrk->mk", W, vals))
    return np.concatenate(out, axis=0)


def integrate_many(regions: Sequence, integrand: Callable, mask: ThickSet | None = None,
                   spec: QuadratureSpec | None = None, abs_tol: float = 0.0) -> np.ndarray:
    """Integrate ``integrand`` over each region (optionally intersected with ``mask``).

    ``integrand`` maps an ``(N, d)`` array of points to ``(N,)`` or ``(N, K)``
    values.  Returns shape ``(len(regions),)`` or ``(len(regions), K)``.
    Raises :class:`ToleranceNotReached` (carrying the estimate) when the
    depth budget runs out.
    """
    spec = spec or DEFAULT_SPEC
    regions = list(regions)
    d = regions[0].dim if regions else 1
    probe = np.asarray(integrand(np.zeros((1, d))))
    scalar = probe.ndim == 1
    K = 1 if scalar else probe.shape[1]
    dtype = np.result_type(probe.dtype, float)
    n_owner = len(regions)
    accepted = np.zeros((n_owner, K), dtype=dtype)
    err_acc = np.zeros((n_owner, K))
    batches = _build_batches(regions, mask, spec)
    vol_owner = np.zeros(n_owner)
    for b in batches:
        np.add.at(vol_owner, b.owner, b.measure())
    vol_owner[vol_owner == 0] = 1.0
    n = spec.rule_order
    active = [(b, _eval_batch(b, integrand, n)) for b in batches if b.size]
    eps_floor = 1e-13
    for _ in range(spec.max_depth + 1):
        if not active:
            break
        staged = []
        total = accepted.copy()
        for batch, coarse in active:
            kids, parent = batch.children()
            kv = _eval_batch(kids, integrand, n)
            fine = np.zeros_like(coarse)
            np.add.at(fine, parent, kv)
            np.add.at(total, batch.owner, fine)
            staged.append((batch, coarse, kids, parent, kv, fine))
        new_active = []
        for batch, coarse, kids, parent, kv, fine in staged:
            frac = (batch.measure() / vol_owner[batch.owner])[:, None]
            err = np.abs(fine - coarse)
            tol = np.maximum(spec.rel_tol * np.abs(total[batch.owner]) * frac + abs_tol * frac,
                             eps_floor * np.abs(fine))
            ok = np.all(err <= tol, axis=1)
            np.add.at(accepted, batch.owner[ok], fine[ok])
            np.add.at(err_acc, batch.owner[ok], err[ok])
            if not ok.all():
                bad_kids = np.flatnonzero(~ok[parent])
                new_active.append((kids.take(bad_kids), kv[bad_kids]))
        active = new_active
    if active:
        estimate = accepted.copy()
        for batch, coarse in active:
            np.add.at(estimate, batch.owner, coarse)
        estimate = estimate[:, 0] if scalar else estimate
        raise ToleranceNotReached("quadrature depth exhausted", estimate=estimate, error=err_acc)
    return accepted[:, 0] if scalar else accepted


def integrate_on(region, integrand: Callable, mask: ThickSet | None = None,
                 spec: QuadratureSpec | None = None, abs_tol: float = 0.0):
    """Integral of ``integrand`` over ``region`` (intersected with ``mask``)."""
    try:
        return integrate_many([region], integrand, mask, spec, abs_tol)[0]
    except ToleranceNotReached as exc:
        exc.estimate = exc.estimate[0]
        raise
