import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Polygon as SPolygon, box as sbox
from shapely.ops import unary_union

from lsverify.errors import GeometryError, NoCubeFits
from lsverify.geometry import (Box, BoxUnion, EquilateralTriangle, ExtendedInterval, FullSpace,
                               GeneralizedRectangle, PeriodicBoxUnion, Polygon, Product, QuadratureSpec,
                               RightTriangle, Sector, cube_witness, integrate_on, intersect_volume,
                               thickness_of)
from lsverify.spectral import hermite_functions

INF = math.inf


def rect(*bounds):
    return GeneralizedRectangle(tuple(ExtendedInterval(a, b) for a, b in bounds))


def gamma_quarter():
    # per unit cell: [-1/2, -3/8] u [3/8, 1/2]  ==  [3/8, 5/8] shifted by a half period
    return PeriodicBoxUnion((1.0,), (Box((0.375,), (0.25,)),))


# --- oracle: shapely areas of window intersections for 2-D sets --------------------------

def _shapely_set(omega, lo, hi):
    if isinstance(omega, BoxUnion):
        return unary_union([sbox(*b.corner, *b.hi) for b in omega.boxes])
    p = omega.period
    polys = []
    for b in omega.base:
        i0 = np.floor((lo - b.hi) / p).astype(int) - 1
        i1 = np.ceil((hi - b.corner) / p).astype(int) + 1
        for i in range(i0[0], i1[0] + 1):
            for j in range(i0[1], i1[1] + 1):
                c = b.corner + p * np.array([i, j])
                polys.append(sbox(c[0], c[1], c[0] + b.sides[0], c[1] + b.sides[1]))
    return unary_union(polys)


def brute_thickness(omega, domain, rho, corners):
    best = INF
    for x in corners:
        if not domain.contains_cube(x, rho):
            continue
        cube = sbox(x[0], x[1], x[0] + rho, x[1] + rho)
        s = _shapely_set(omega, np.asarray(x), np.asarray(x) + rho)
        best = min(best, s.intersection(cube).area / rho**2)
    return best


# --- cube_witness ------------------------------------------------------------------------

def test_witness_rectangle():
    x = cube_witness(rect((0, 5), (0, 3)), 1.0)
    assert x is not None and rect((0, 5), (0, 3)).contains_cube(x, 1.0)


def test_witness_small_triangle_is_none():
    assert cube_witness(EquilateralTriangle(1.6), 1.0) is None


def test_witness_sector_six():
    dom = Sector(6)
    x = cube_witness(dom, 1.0)
    assert np.allclose(x, (math.sqrt(3), 0.0))
    assert dom.contains_cube(x, 1.0)
    # nothing to the left of the cusp works at height 0
    assert not dom.contains_cube((math.sqrt(3) - 0.01, 0.0), 1.0)


@pytest.mark.parametrize("dom", [Sector(4), Sector(3), RightTriangle(4, 5), RightTriangle(3, 2),
                                 EquilateralTriangle(3), rect((-INF, 0), (2, INF)),
                                 Product((Sector(4), rect((0, 1))))])
def test_witness_verified(dom):
    x = cube_witness(dom, 1.0)
    assert x is not None and dom.contains_cube(x, 1.0)


def test_equilateral_threshold():
    # the largest axis-parallel square in a triangle of side L has side L / (1 + 2/sqrt3)
    crit = 1 + 2 / math.sqrt(3)
    assert cube_witness(EquilateralTriangle(crit * (1 + 1e-9)), 1.0) is not None
    assert cube_witness(EquilateralTriangle(crit * (1 - 1e-6)), 1.0) is None


def test_equilateral_between_sqrt3_and_threshold_has_no_square():
    dom = EquilateralTriangle(1.9)
    assert cube_witness(dom, 1.0) is None
    g = np.linspace(-1.0, 1.0, 201)
    assert not any(dom.contains_cube((a, b), 1.0) for a in g for b in np.linspace(-0.6, 1.1, 171))


# --- thickness ---------------------------------------------------------------------------

def test_fullspace_thickness():
    assert thickness_of(FullSpace(), rect((0, 3), (0, 2)), 1.0).gamma == 1.0


def test_quarter_pattern_on_line():
    res = thickness_of(gamma_quarter(), rect((-INF, INF)), 1.0)
    assert res.gamma == pytest.approx(0.25, abs=1e-14)
    assert res.exact


def test_equidistributed_boxes():
    delta = 0.3
    s = delta * math.sqrt(2)           # square inscribed in the ball of radius delta
    om = PeriodicBoxUnion((1.0, 1.0), (Box((0.5 - s / 2,) * 2, (s, s)),))
    res = thickness_of(om, rect((-INF, INF), (-INF, INF)), 2.0)
    # a window of side 2 always holds exactly four periods
    assert res.gamma == pytest.approx(s * s, rel=1e-12)


def test_nonperiodic_unbounded_rejected():
    with pytest.raises(GeometryError):
        thickness_of(BoxUnion((Box((0, 0), (1, 1)),)), rect((0, INF), (0, 1)), 0.5)


def test_thickness_needs_cube():
    with pytest.raises(NoCubeFits):
        thickness_of(FullSpace(), EquilateralTriangle(1.0), 1.0)


def test_superset_gives_one():
    om = BoxUnion((Box((-1, -1), (5, 5)),))
    assert thickness_of(om, rect((0, 2), (0, 2)), 0.7).gamma == pytest.approx(1.0)


def test_zero_thickness_flag():
    om = BoxUnion((Box((0, 0), (0.2, 0.2)),))
    res = thickness_of(om, rect((0, 3), (0, 3)), 1.0)
    assert res.gamma == 0.0 and not res.thick


def test_pattern_thickness_unit_square(omega, square):
    assert thickness_of(omega, square, 0.1).gamma == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("dom", [rect((0, 1.3), (0, 0.9)), RightTriangle(4, 1.5), RightTriangle(3, 1.2),
                                 EquilateralTriangle(2.0)])
def test_thickness_matches_brute_force(dom):
    om = BoxUnion((Box((0.1, 0.0), (0.3, 0.5)), Box((0.25, 0.3), (0.6, 0.2)), Box((0.8, -1), (0.15, 3))))
    rho = 0.5
    res = thickness_of(om, dom, rho)
    lo, hi = dom.bbox()
    g = np.linspace(0, 1, 41)
    corners = [(lo[0] + a * (hi[0] - lo[0]), lo[1] + b * (hi[1] - lo[1])) for a in g for b in g]
    corners.append(res.witness_x)
    brute = brute_thickness(om, dom, rho, corners)
    assert res.gamma <= brute + 1e-12
    # the reported witness attains the minimum
    cube = sbox(res.witness_x[0], res.witness_x[1], res.witness_x[0] + rho, res.witness_x[1] + rho)
    assert _shapely_set(om, None, None).intersection(cube).area / rho**2 == pytest.approx(res.gamma, abs=1e-12)
    assert dom.contains_cube(res.witness_x, rho)


def test_sector_periodic_thickness_vs_brute_force():
    om = PeriodicBoxUnion((1.0, 1.0), (Box((0.2, 0.3), (0.5, 0.4)),))
    dom = Sector(4)
    res = thickness_of(om, dom, 1.0)
    rng = np.random.default_rng(1)
    corners = rng.random((1500, 2)) * np.array([6.0, 4.0]) + np.array([1.0, 0.0])
    brute = brute_thickness(om, dom, 1.0, corners)
    assert res.gamma <= brute + 1e-12
    assert res.gamma >= brute - 0.02


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1.5), st.floats(0, 1.5), st.floats(0.05, 0.8), st.floats(0.05, 0.8)),
                min_size=1, max_size=4),
       st.tuples(st.floats(0, 1.5), st.floats(0, 1.5), st.floats(0.05, 0.8), st.floats(0.05, 0.8)))
def test_thickness_monotone(boxes, extra):
    dom = rect((0, 2), (0, 2))
    base = tuple(Box((a, b), (w, h)) for a, b, w, h in boxes)
    g1 = thickness_of(BoxUnion(base), dom, 0.6).gamma
    g2 = thickness_of(BoxUnion(base + (Box(extra[:2], extra[2:]),)), dom, 0.6).gamma
    assert g2 >= g1 - 1e-12


# --- intersect_volume / integrate_on ------------------------------------------------------

def test_intersect_examples():
    R = Box((0, 0), (1, 1))
    assert intersect_volume(FullSpace(), R) == pytest.approx(1.0)
    assert intersect_volume(BoxUnion((Box((0, 0), (0.5, 1)),)), R) == pytest.approx(0.5)
    om = PeriodicBoxUnion((1.0, 1e6), (Box((0.375, -5e5 + 1), (0.25, 1e6 - 2)),))
    assert intersect_volume(om, Box((0, 0), (2, 1))) == pytest.approx(0.5, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-0.5, 1.5), st.floats(-0.5, 1.5), st.floats(0.01, 1), st.floats(0.01, 1)),
                min_size=1, max_size=6))
def test_complement_sums_to_region(boxes):
    R = Box((0, 0), (1.2, 0.8))
    om = BoxUnion(tuple(Box((a, b), (w, h)) for a, b, w, h in boxes))
    total = intersect_volume(om, R) + intersect_volume(om.complement_in(R), R)
    assert total == pytest.approx(R.volume(), abs=1e-9)
    expected = unary_union([sbox(a, b, a + w, b + h) for a, b, w, h in boxes]).intersection(
        sbox(0, 0, 1.2, 0.8)).area
    assert intersect_volume(om, R) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 2), st.floats(-1, 2), st.floats(0.05, 1.5), st.floats(0.05, 1.5)),
                min_size=1, max_size=5))
def test_polygon_intersection_vs_shapely(boxes):
    tri = Polygon([[0, 0], [2, 0.3], [0.7, 1.6]])
    om = BoxUnion(tuple(Box((a, b), (w, h)) for a, b, w, h in boxes))
    expected = unary_union([sbox(a, b, a + w, b + h) for a, b, w, h in boxes]).intersection(
        SPolygon([[0, 0], [2, 0.3], [0.7, 1.6]])).area
    assert intersect_volume(om, tri) == pytest.approx(expected, abs=1e-12)


def test_integrate_sin_squared():
    val = integrate_on(Box((0,), (1,)), lambda x: np.sin(np.pi * x[:, 0]) ** 2)
    assert val == pytest.approx(0.5, rel=1e-12)


def test_integrate_half_mask():
    val = integrate_on(Box((0, 0), (1, 1)), lambda x: np.ones(len(x)), BoxUnion((Box((0, 0), (0.5, 1)),)))
    assert val == pytest.approx(0.5, rel=1e-14)


def test_integrate_ground_state_vs_gauss_hermite():
    val = integrate_on(Box((-12,), (24,)), lambda x: hermite_functions(0, x[:, 0])[0] ** 2)
    t, w = np.polynomial.hermite.hermgauss(40)
    oracle = float(np.sum(w * np.exp(t * t) * hermite_functions(0, t)[0] ** 2))
    assert val == pytest.approx(1.0, abs=1e-10)
    assert oracle == pytest.approx(1.0, abs=1e-12)


def test_integrate_triangle_moment():
    # int_T x^2 over the triangle (0,0),(1,0),(0,1) is 1/12
    val = integrate_on(Polygon([[0, 0], [1, 0], [0, 1]]), lambda x: x[:, 0] ** 2)
    assert val == pytest.approx(1 / 12, rel=1e-12)


@pytest.mark.parametrize("region", [Box((0, 0), (1, 1)), Polygon([[0, 0], [1, 0.2], [0.3, 0.9]])])
def test_constant_integrand_equals_volume(region, omega):
    val = integrate_on(region, lambda x: np.ones(len(x)), omega)
    assert val == pytest.approx(intersect_volume(omega, region), rel=1e-8)


def test_deterministic(omega):
    f = lambda x: np.cos(7 * x[:, 0]) * np.exp(x[:, 1])
    spec = QuadratureSpec(seed=5)
    a = integrate_on(Box((0, 0), (1, 1)), f, omega, spec)
    b = integrate_on(Box((0, 0), (1, 1)), f, omega, spec)
    assert a == b


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=2.0)
    with pytest.raises(ValueError):
        QuadratureSpec(rule_order=1)
