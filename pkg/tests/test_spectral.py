import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lsverify.errors import EmptySpectrum, GeometryError
from lsverify.bernstein import PureLaplacian
from lsverify.geometry import Box, ExtendedInterval, GeneralizedRectangle
from lsverify.spectral import (BoundaryCondition, HermiteTensor, RectangleTrig, enumerate_modes, evaluate,
                               hermite_functions, multi_indices, norm_sq, random_function, single_mode)
from lsverify.verify import spectral_basis_for

D, N = BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN
PI = math.pi


def trig(sides, bc=D, scale=None):
    return RectangleTrig(Box(np.zeros(len(sides)), sides), bc, scale)


# --- enumeration --------------------------------------------------------------------------

def test_modes_interval_pi():
    modes = enumerate_modes(trig([PI]), 10.0)
    assert [m.index for m in modes] == [(1,), (2,), (3,)]
    assert [m.eigenvalue for m in modes] == pytest.approx([1, 4, 9])


def test_modes_unit_square():
    modes = enumerate_modes(trig([1, 1]), 5 * PI**2)
    assert [m.index for m in modes] == [(1, 1), (1, 2), (2, 1)]


def test_modes_hermite():
    modes = enumerate_modes(HermiteTensor(2), 6.0)
    assert len(modes) == 6
    assert all(m.eigenvalue == 2 * sum(m.index) + 2 for m in modes)
    assert sorted(m.eigenvalue for m in modes) == [m.eigenvalue for m in modes]


def test_modes_neumann_include_constant():
    modes = enumerate_modes(trig([1], N), 0.5)
    assert [m.index for m in modes] == [(0,)] and modes[0].eigenvalue == 0


def test_modes_scaled():
    b = trig([1, 1], scale=(2.0, 0.5))
    for m in enumerate_modes(b, 60.0):
        k1, k2 = m.index
        assert m.eigenvalue == pytest.approx(2 * (PI * k1) ** 2 + 0.5 * (PI * k2) ** 2)
        assert m.eigenvalue <= 60.0


def test_empty_spectrum():
    with pytest.raises(EmptySpectrum):
        enumerate_modes(trig([1, 1]), 1.0)
    with pytest.raises(EmptySpectrum):
        random_function(trig([1]), 5.0, 0)
    with pytest.raises(EmptySpectrum):
        enumerate_modes(HermiteTensor(3), 2.9)


def test_unbounded_rectangle_rejected():
    half_line = GeneralizedRectangle((ExtendedInterval(0, math.inf),))
    with pytest.raises(GeometryError):
        spectral_basis_for(half_line, "dirichlet", PureLaplacian())


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 3), st.floats(0.3, 3), st.floats(1, 300), st.sampled_from([D, N]))
def test_enumeration_matches_brute_force(a, b, lam, bc):
    basis = trig([a, b], bc)
    lo = 1 if bc is D else 0
    brute = sorted((k1, k2) for k1 in range(lo, 40) for k2 in range(lo, 40)
                   if (PI * k1 / a) ** 2 + (PI * k2 / b) ** 2 <= lam)
    try:
        got = sorted(m.index for m in enumerate_modes(basis, lam))
    except EmptySpectrum:
        got = []
    assert got == brute


def test_multi_indices():
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(multi_indices(3, 4)) == math.comb(6, 2)


# --- sampling -----------------------------------------------------------------------------

def test_random_function_normalised_and_deterministic():
    b = trig([1])
    f = random_function(b, 10 * PI**2, 7)
    assert len(f.terms) == 3
    assert f.norm_sq_exact() == pytest.approx(1.0, abs=1e-14)
    g = random_function(b, 10 * PI**2, 7)
    assert np.array_equal(f.coefficients(), g.coefficients())


@pytest.mark.parametrize("law", ["complex-normal", "real-normal", "uniform-sphere"])
def test_coefficient_laws(law):
    f = random_function(trig([1, 1]), 100.0, 3, law)
    assert f.norm_sq_exact() == pytest.approx(1.0)
    if law == "real-normal":
        assert np.all(f.coefficients().imag == 0)


def test_single_mode_spectrum():
    f = random_function(trig([1]), 1.5 * PI**2, 11)
    assert len(f.terms) == 1 and abs(f.terms[0][1]) == pytest.approx(1.0)


# --- evaluation ---------------------------------------------------------------------------

def test_ground_state_value():
    f = single_mode(HermiteTensor(1), (0,))
    assert f(np.array([[0.0]]))[0] == pytest.approx(PI ** -0.25)


def test_sine_value():
    f = single_mode(trig([1]), (1,))
    assert evaluate(f, [0.5]) == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("y", [0.3, 1.0, 2.5])
def test_complex_sine(y):
    f = single_mode(trig([1]), (1,))
    assert abs(evaluate(f, [1j * y])) == pytest.approx(math.sqrt(2) * abs(math.sinh(PI * y)), rel=1e-12)


def test_complex_matches_closed_form():
    f = single_mode(trig([1, 2], N), (1, 2))
    z = np.array([[0.3 + 0.7j, -0.2 + 1.1j]])
    expected = math.sqrt(2) * np.cos(PI * z[0, 0]) * np.cos(PI * z[0, 1])
    assert f(z)[0] == pytest.approx(expected, rel=1e-12)


def test_grid_values_match_pointwise(corpus):
    f = corpus[0]
    ax = [np.linspace(0, 1, 7) + 0.2j, np.linspace(-0.5, 1.5, 5)]
    G = f.grid_values(ax)
    pts = np.stack(np.meshgrid(*ax, indexing="ij"), -1).reshape(-1, 2)
    assert np.allclose(G.ravel(), f(pts), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("basis", [trig([1, 1]), trig([1.3, 0.7], N), HermiteTensor(2)])
def test_derivatives_vs_finite_differences(basis):
    f = random_function(basis, 40.0, 2)
    rng = np.random.default_rng(0)
    x = rng.random((100, 2)) * (np.array([1.0, 0.7]) if basis.region() is not None else 4.0)
    h = 1e-4
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        fd = (f(x + e) - f(x - e)) / (2 * h)
        alpha = (1, 0) if j == 0 else (0, 1)
        exact = f(x, alpha)
        scale = np.max(np.abs(exact))
        assert np.max(np.abs(fd - exact)) <= 1e-5 * scale


def test_second_derivative_trig_exact():
    f = single_mode(trig([1]), (3,))
    x = np.linspace(0, 1, 11)[:, None]
    assert np.allclose(f(x, (2,)), -(3 * PI) ** 2 * f(x), atol=1e-10)
    assert np.allclose(f(x, (4,)), (3 * PI) ** 4 * f(x), atol=1e-6)


# --- Hermite suite ------------------------------------------------------------------------

def test_hermite_orthonormal():
    t, w = np.polynomial.hermite.hermgauss(80)
    phi = hermite_functions(20, t) * np.exp(t * t / 2)
    G = (phi * w) @ phi.T
    assert np.max(np.abs(G - np.eye(21))) < 1e-8


def test_hermite_eigen_relation():
    t = np.linspace(-8, 8, 801)
    for k in range(16):
        f = single_mode(HermiteTensor(1), (k,))
        res = -f(t[:, None], (2,)) + t**2 * f(t[:, None]) - (2 * k + 1) * f(t[:, None])
        assert np.max(np.abs(res)) < 1e-6


def test_hermite_derivative_recurrence():
    t = np.linspace(-3, 3, 13)
    phi = hermite_functions(6, t)
    for k in range(1, 6):
        f = single_mode(HermiteTensor(1), (k,))
        rhs = math.sqrt(k / 2) * phi[k - 1] - math.sqrt((k + 1) / 2) * phi[k + 1]
        assert np.allclose(f(t[:, None], (1,)), rhs, atol=1e-13)


def test_hermite_complex_argument():
    # phi_1(z) = sqrt2 z pi^{-1/4} exp(-z^2/2)
    z = 0.4 + 0.9j
    val = hermite_functions(1, np.array([z]))[1, 0]
    assert val == pytest.approx(math.sqrt(2) * z * PI ** -0.25 * np.exp(-z * z / 2), rel=1e-13)


# --- norms --------------------------------------------------------------------------------

def test_norm_examples():
    f = single_mode(trig([1]), (1,))
    assert norm_sq(f) == 1.0
    assert norm_sq(f, Box([0.0], [0.5])) == pytest.approx(0.5, rel=1e-12)


def test_parseval(dirichlet_basis):
    f = random_function(dirichlet_basis, 500.0, 4)
    assert norm_sq(f, dirichlet_basis.region()) == pytest.approx(f.norm_sq_exact(), rel=1e-8)


def test_parseval_hermite():
    f = random_function(HermiteTensor(2), 20.0, 1)
    assert norm_sq(f, Box([-14, -14], [28, 28])) == pytest.approx(1.0, rel=1e-8)


# --- orthonormal-frame invariance ---------------------------------------------------------

def _directional(f, x, U, beta):
    """prod_j (U[j] . grad)^beta_j f at x, expanded into ordinary partials."""
    poly = np.array([[1.0]])
    for j, b in enumerate(beta):
        lin = np.zeros((2, 2))
        lin[1, 0], lin[0, 1] = U[j, 0], U[j, 1]
        for _ in range(b):
            poly = _mul2d(poly, lin)
    out = 0.0
    for a0 in range(poly.shape[0]):
        for a1 in range(poly.shape[1]):
            if poly[a0, a1] != 0:
                out = out + poly[a0, a1] * f(x, (a0, a1))
    return out


def _mul2d(a, b):
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i:i + b.shape[0], j:j + b.shape[1]] += a[i, j] * b
    return out


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 2 * PI), st.integers(0, 3), st.integers(0, 50))
def test_frame_invariance(theta, m, seed):
    basis = trig([1, 1], N)
    f = random_function(basis, 60.0, seed, "real-normal")
    g = random_function(basis, 60.0, seed + 1, "real-normal")
    U = np.array([[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]])
    x = np.array([[0.31, 0.77]])
    std = sum(f(x, a) * g(x, a) / (math.factorial(a[0]) * math.factorial(a[1])) for a in multi_indices(2, m))
    rot = sum(_directional(f, x, U, a) * _directional(g, x, U, a) / (math.factorial(a[0]) * math.factorial(a[1]))
              for a in multi_indices(2, m))
    assert np.real(rot) == pytest.approx(np.real(std), rel=1e-6, abs=1e-6)
