"""Measurable sets used as observation regions: all of space, finite unions of
boxes, and periodic unions of boxes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from ..errors import GeometryError
from .shapes import Box


class ThickSet:
    dim: int | None

    def cells_in(self, lo, hi):
        """Pairwise disjoint boxes ``(lo, hi)`` whose union is the set within ``[lo, hi]``."""
        raise NotImplementedError

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class FullSpace(ThickSet):
    dim: int | None = None

    def cells_in(self, lo, hi):
        lo = np.asarray(lo, dtype=float)[None, :]
        hi = np.asarray(hi, dtype=float)[None, :]
        return lo.copy(), hi.copy()

    def contains(self, points):
        return np.ones(np.atleast_2d(points).shape[0], dtype=bool)


@dataclass(frozen=True, eq=False)
class BoxUnion(ThickSet):
    boxes: tuple

    def __post_init__(self):
        boxes = tuple(self.boxes)
        if boxes and len({b.dim for b in boxes}) != 1:
            raise GeometryError("all boxes must share one dimension")
        object.__setattr__(self, "boxes", boxes)
        lo = np.array([b.corner for b in boxes]) if boxes else np.zeros((0, 0))
        hi = np.array([b.hi for b in boxes]) if boxes else np.zeros((0, 0))
        clo, chi = disjoint_cells(lo, hi)
        object.__setattr__(self, "_lo", clo)
        object.__setattr__(self, "_hi", chi)

    @property
    def dim(self):
        return self.boxes[0].dim if self.boxes else None

    def cells_in(self, lo, hi):
        return _clip_cells(self._lo, self._hi, lo, hi)

    def contains(self, points):
        p = np.atleast_2d(points)
        out = np.zeros(p.shape[0], dtype=bool)
        for b in self.boxes:
            out |= b.contains(p)
        return out

    def complement_in(self, box: Box) -> "BoxUnion":
        """Boxes covering ``box`` minus this set (up to a null set)."""
        lo, hi = self.cells_in(box.corner, box.hi)
        clo, chi = complement_cells(lo, hi, box.corner, box.hi)
        return BoxUnion(tuple(Box.from_bounds(a, b) for a, b in zip(clo, chi)))


@dataclass(frozen=True, eq=False)
class PeriodicBoxUnion(ThickSet):
    """``base + period * Z^d``; all base boxes lie in one period cell."""

    period: np.ndarray
    base: tuple

    def __post_init__(self):
        p = np.array(self.period, dtype=float)
        if p.ndim != 1 or np.any(p <= 0) or not np.all(np.isfinite(p)):
            raise GeometryError("period must be a vector of positive numbers")
        base = tuple(self.base)
        if not base:
            raise GeometryError("periodic union needs at least one base box")
        if any(b.dim != p.size for b in base):
            raise GeometryError("base boxes must match the period dimension")
        lo = np.array([b.corner for b in base])
        hi = np.array([b.hi for b in base])
        if np.any(hi.max(axis=0) - lo.min(axis=0) > p * (1 + 1e-12)):
            raise GeometryError("base boxes must fit inside a single period cell")
        p.setflags(write=False)
        object.__setattr__(self, "period", p)
        object.__setattr__(self, "base", base)
        clo, chi = disjoint_cells(lo, hi)
        object.__setattr__(self, "_lo", clo)
        object.__setattr__(self, "_hi", chi)

    @property
    def dim(self):
        return self.period.size

    def density(self) -> float:
        return float(np.prod(self._hi - self._lo, axis=1).sum() / np.prod(self.period))

    def cells_in(self, lo, hi):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        p = self.period
        blo, bhi = self._lo.min(axis=0), self._hi.max(axis=0)
        ranges = []
        for j in range(p.size):
            n0 = math.floor((lo[j] - bhi[j]) / p[j])
            n1 = math.ceil((hi[j] - blo[j]) / p[j])
            ranges.append(np.arange(n0, n1 + 1))
        shifts = np.array(list(iproduct(*ranges)), dtype=float) * p
        all_lo = (self._lo[None, :, :] + shifts[:, None, :]).reshape(-1, p.size)
        all_hi = (self._hi[None, :, :] + shifts[:, None, :]).reshape(-1, p.size)
        return _clip_cells(all_lo, all_hi, lo, hi)

    def contains(self, points):
        p = np.atleast_2d(points)
        ref = self._lo.min(axis=0)
        red = p - np.floor((p - ref) / self.period) * self.period
        out = np.zeros(p.shape[0], dtype=bool)
        for a, b in zip(self._lo, self._hi):
            out |= np.all((red > a) & (red < b), axis=1)
        return out


def _clip_cells(lo, hi, wlo, whi):
    wlo = np.asarray(wlo, dtype=float)
    whi = np.asarray(whi, dtype=float)
    if lo.shape[0] == 0:
        return np.zeros((0, wlo.size)), np.zeros((0, wlo.size))
    clo = np.maximum(lo, wlo)
    chi = np.minimum(hi, whi)
    keep = np.all(chi > clo, axis=1)
    return clo[keep], chi[keep]


def disjoint_cells(lo: np.ndarray, hi: np.ndarray):
    """Split a union of boxes into pairwise disjoint boxes (same union)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    keep = np.all(hi > lo, axis=1) if lo.size else np.zeros(0, dtype=bool)
    lo, hi = lo[keep], hi[keep]
    n = lo.shape[0]
    if n <= 1:
        return lo.copy(), hi.copy()
    overlap = np.all((lo[:, None, :] < hi[None, :, :]) & (lo[None, :, :] < hi[:, None, :]), axis=2)
    np.fill_diagonal(overlap, False)
    if not overlap.any():
        return lo.copy(), hi.copy()
    d = lo.shape[1]
    edges = [np.unique(np.concatenate([lo[:, j], hi[:, j]])) for j in range(d)]
    covered = np.zeros(tuple(e.size - 1 for e in edges), dtype=bool)
    for a, b in zip(lo, hi):
        idx = tuple(slice(np.searchsorted(edges[j], a[j]), np.searchsorted(edges[j], b[j]))
                    for j in range(d))
        covered[idx] = True
    cells = np.argwhere(covered)
    clo = np.column_stack([edges[j][cells[:, j]] for j in range(d)])
    chi = np.column_stack([edges[j][cells[:, j] + 1] for j in range(d)])
    return clo, chi


def complement_cells(lo, hi, wlo, whi):
    """Disjoint boxes covering ``[wlo, whi]`` minus the given disjoint cells."""
    wlo = np.asarray(wlo, dtype=float)
    whi = np.asarray(whi, dtype=float)
    d = wlo.size
    edges = [np.unique(np.concatenate([[wlo[j], whi[j]], lo[:, j], hi[:, j]])) for j in range(d)]
    covered = np.zeros(tuple(e.size - 1 for e in edges), dtype=bool)
    for a, b in zip(lo, hi):
        idx = tuple(slice(np.searchsorted(edges[j], a[j]), np.searchsorted(edges[j], b[j]))
                    for j in range(d))
        covered[idx] = True
    cells = np.argwhere(~covered)
    clo = np.column_stack([edges[j][cells[:, j]] for j in range(d)]) if cells.size else np.zeros((0, d))
    chi = np.column_stack([edges[j][cells[:, j] + 1] for j in range(d)]) if cells.size else np.zeros((0, d))
    return clo, chi
