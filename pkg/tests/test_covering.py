import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Polygon as SPolygon
from shapely.ops import unary_union

from lsverify.covering import (Covering, build_covering, product_covering, product_eta,
                               validate_covering)
from lsverify.errors import NoCubeFits, RhoMismatch, WindowRequired
from lsverify.geometry import (Box, EquilateralTriangle, ExtendedInterval, GeneralizedRectangle,
                               Polygon, QuadratureSpec, RightTriangle, Sector)

FAST = QuadratureSpec(mc_samples=100_000, seed=3)
R3 = math.sqrt(3.0)


def interval(a, b):
    return GeneralizedRectangle((ExtendedInterval(a, b),))


def _poly(shape):
    if isinstance(shape, Box):
        (x0, y0), (x1, y1) = shape.corner, shape.hi
        return SPolygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    return SPolygon(shape.vertices_ccw)


def _exact_cover_check(cov, domain_poly):
    """Union of elements equals the domain and the summed area respects kappa."""
    polys = [_poly(e.shape) for e in cov.elements]
    union = unary_union(polys)
    assert union.symmetric_difference(domain_poly).area == pytest.approx(0.0, abs=1e-9)
    assert sum(p.area for p in polys) <= cov.kappa * domain_poly.area + 1e-9


def test_interval_example():
    cov = build_covering(interval(0, 2.5), 1.0)
    assert cov.params == (2, 1.0, (1.0,), 1.0)
    assert len(cov.elements) == 3
    rep = validate_covering(cov, FAST)
    assert rep.passed and rep.max_overlap_measured == 2
    assert cov.elements[-1].shape.hi[0] == pytest.approx(2.5)


def test_interval_too_short():
    with pytest.raises(NoCubeFits):
        build_covering(interval(0, 0.5), 1.0)


def test_unbounded_needs_window():
    with pytest.raises(WindowRequired):
        build_covering(interval(0, math.inf), 1.0)
    with pytest.raises(WindowRequired):
        build_covering(Sector(6), 1.0)


def test_half_line_window():
    cov = build_covering(interval(0, math.inf), 0.5, window=Box((0,), (10,)))
    assert cov.kappa == 1
    rep = validate_covering(cov, FAST)
    assert rep.passed and rep.max_overlap_measured == 1


def test_unit_square(square_cov):
    assert square_cov.params == (4, 0.1, (0.1, 0.1), 0.5)
    assert len(square_cov.elements) == 100
    rep = validate_covering(square_cov, FAST)
    assert rep.passed
    assert min(c.eta_measured for c in rep.per_element) == pytest.approx(0.5, abs=1e-12)


def test_sector_six():
    dom = Sector(6)
    cov = build_covering(dom, 1.0, window=Box((0, 0), (10, 10)))
    q = 1 + R3
    assert cov.kappa == 1 and cov.eta == pytest.approx(0.25)
    assert tuple(cov.l) == pytest.approx((q, 1.0))
    rep = validate_covering(cov, FAST)
    assert rep.passed, rep.messages


@pytest.mark.parametrize("n,params", [(4, (3, 1.0, (2.0, 2.0), 0.25)),
                                      (3, (3, 1.0, (1 + 1 / R3, 1 + R3), 0.25))])
def test_right_triangles(n, params):
    dom = RightTriangle(n, 5.0)
    cov = build_covering(dom, 1.0)
    assert cov.kappa == params[0] and cov.rho == params[1]
    assert tuple(cov.l) == pytest.approx(params[2])
    assert cov.eta == pytest.approx(params[3])
    rep = validate_covering(cov, FAST)
    assert rep.passed, rep.messages
    assert rep.max_overlap_measured <= 3
    _exact_cover_check(cov, SPolygon(dom.polygon().vertices_ccw))


def test_equilateral_default_tiles():
    dom = EquilateralTriangle(3 * R3)
    cov = build_covering(dom, 1.0)
    assert cov.kappa == 3 and cov.eta == pytest.approx(R3 / 4)
    rep = validate_covering(cov, FAST)
    assert rep.passed, rep.messages
    _exact_cover_check(cov, SPolygon(dom.polygon().vertices_ccw))


def test_equilateral_narrow_tiles_hold_no_unit_square():
    # tiles of side sqrt3*rho cannot contain a rho-square; the validator must flag it
    cov = build_covering(EquilateralTriangle(3 * R3), 1.0, narrow_tiles=True)
    assert cov.kappa == 3 and tuple(cov.l) == pytest.approx((R3, 1.5)) and cov.eta == pytest.approx(R3 / 4)
    rep = validate_covering(cov, FAST)
    assert not rep.passed
    assert not any(c.cube_ok for c in rep.per_element)
    assert all(c.eta_ok and c.inside_ok for c in rep.per_element)


def test_sector_exact_cover_in_window():
    dom = Sector(4)
    cov = build_covering(dom, 1.0, window=Box((0, 0), (6, 6)))
    polys = [_poly(e.shape) for e in cov.elements]
    wedge = SPolygon([(0, 0), (6, 0), (6, 6)])
    # everything in the wedge below height 5 is covered
    lower = wedge.intersection(SPolygon([(0, 0), (6, 0), (6, 5), (0, 5)]))
    assert lower.difference(unary_union(polys)).area == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_product_eta_formula(d):
    cov = build_covering(interval(0, 1), 0.5)
    for _ in range(d - 1):
        cov = product_covering(cov, build_covering(interval(0, 1), 0.5))
    assert cov.eta == pytest.approx(d ** (-d / 2), rel=1e-12)
    assert cov.eta >= (2 * d) ** (-d / 2)
    assert cov.kappa == 2**d


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 1.0), st.integers(1, 3), st.floats(0.05, 1.0), st.integers(1, 3))
def test_product_eta_matches_closed_form(e1, d1, e2, d2):
    expected = e1 * e2 * d2 ** (d2 / 2) * d1 ** (d1 / 2) / (d1 + d2) ** ((d1 + d2) / 2)
    assert product_eta(e1, d1, e2, d2) == pytest.approx(expected, rel=1e-12)


def test_product_rho_mismatch():
    with pytest.raises(RhoMismatch):
        product_covering(build_covering(interval(0, 1), 0.5), build_covering(interval(0, 1), 0.25))


def test_product_of_triangle_and_interval():
    cov = product_covering(build_covering(RightTriangle(4, 3.0), 1.0), build_covering(interval(0, 2.5), 1.0))
    assert cov.kappa == 6
    rep = validate_covering(cov, FAST)
    assert rep.passed, rep.messages
    assert min(c.eta_measured for c in rep.per_element) >= cov.eta * (1 - 1e-9)


def test_validator_detects_gap():
    cov = build_covering(interval(0, 3.0), 1.0)
    holed = Covering(cov.elements[:-1], cov.kappa, cov.rho, cov.l, cov.eta, cov.domain)
    rep = validate_covering(holed, FAST)
    assert not rep.passed and rep.uncovered_fraction > 0.2


def test_validator_detects_overlap_excess():
    cov = build_covering(interval(0, 2.5), 1.0)
    tight = Covering(cov.elements, 1, cov.rho, cov.l, cov.eta, cov.domain)
    assert not validate_covering(tight, FAST).passed


def test_validator_detects_bad_eta():
    cov = build_covering(interval(0, 2.0), 1.0)
    greedy = Covering(cov.elements, cov.kappa, cov.rho, cov.l, 1.5, cov.domain)
    assert not validate_covering(greedy, FAST).passed


def test_validation_deterministic(square_cov):
    a = validate_covering(square_cov, FAST)
    b = validate_covering(square_cov, FAST)
    assert a.uncovered_fraction == b.uncovered_fraction and a.max_overlap_measured == b.max_overlap_measured


@settings(max_examples=15, deadline=None)
@given(st.floats(1.0, 6.0), st.floats(0.2, 1.0))
def test_interval_coverings_exact(length, rho):
    if rho > length:
        return
    cov = build_covering(interval(0, length), rho)
    lo = np.array([e.shape.corner[0] for e in cov.elements])
    hi = np.array([e.shape.hi[0] for e in cov.elements])
    assert lo.min() == pytest.approx(0) and hi.max() == pytest.approx(length)
    order = np.argsort(lo)
    assert np.all(lo[order][1:] <= hi[order][:-1] + 1e-12)
    assert np.allclose(hi - lo, rho)
