import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import hermite_e
from scipy import integrate

from exrot.hermite import (
    alpha_coefficients,
    gaussian_derivative_1d,
    gaussian_pdf_nd,
    gca_density,
    hermite_1d,
    hermite_vector,
)
from exrot.stats import Cumulants1D, CumulantVectors
from exrot.tensor import IndexPermutation, commutation_apply, kron, kron_power, vec

PHI0 = 1 / np.sqrt(2 * np.pi)


def test_hermite_1d_values():
    assert hermite_1d(2, 0.0) == -1.0
    assert hermite_1d(3, 0.0) == 0.0
    assert hermite_1d(5, 1.0) == 6.0
    assert hermite_1d(0, 3.0) == 1.0
    with pytest.raises(ValueError):
        hermite_1d(-1, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 8), st.floats(-5, 5))
def test_hermite_1d_matches_numpy_hermite_e(n, z):
    coef = np.zeros(n + 1)
    coef[n] = 1
    assert hermite_1d(n, z) == pytest.approx(hermite_e.hermeval(z, coef), rel=1e-12, abs=1e-9)


def test_hermite_1d_vectorized():
    z = np.linspace(-2, 2, 5)
    np.testing.assert_allclose(hermite_1d(3, z), z**3 - 3 * z)


def test_gaussian_derivative_examples():
    assert gaussian_derivative_1d(0, 1.3, 1.0, 2.0) == pytest.approx(
        np.exp(-0.5 * 0.15**2) / (2 * np.sqrt(2 * np.pi)))
    assert gaussian_derivative_1d(1, 0.7, 0.7, 1.0) == 0.0
    assert gaussian_derivative_1d(2, 0.0) == pytest.approx(-0.398942, abs=1e-6)
    with pytest.raises(ValueError):
        gaussian_derivative_1d(1, 0.0, 0.0, 0.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gaussian_derivative_finite_difference(n):
    x, eps, mu, s = np.linspace(-3, 3, 11), 1e-5, 0.4, 1.3
    fd = (gaussian_derivative_1d(n - 1, x + eps, mu, s) - gaussian_derivative_1d(n - 1, x - eps, mu, s)) / (2 * eps)
    np.testing.assert_allclose(gaussian_derivative_1d(n, x, mu, s), fd, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(8) for n in range(8) if m != n])
def test_hermite_orthogonality(m, n):
    val, _ = integrate.quad(lambda z: PHI0 * np.exp(-0.5 * z * z) * hermite_1d(m, z) * hermite_1d(n, z),
                            -12, 12, epsabs=1e-10, limit=200)
    assert abs(val) < 1e-8


def test_hermite_vector_low_orders():
    x = np.array([0.3, -1.2])
    np.testing.assert_array_equal(hermite_vector(1, x, np.eye(2)), x)
    assert hermite_vector(0, x).tolist() == [1.0]
    np.testing.assert_array_equal(hermite_vector(2, np.zeros(2), np.eye(2)), [-1, 0, 0, -1])
    cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    np.testing.assert_allclose(hermite_vector(2, x, cov), kron(x, x) - vec(cov), rtol=1e-14)


@pytest.mark.parametrize("n", range(0, 7))
def test_identity_fast_path_matches_general_recursion(n):
    rng = np.random.default_rng(n)
    x = rng.normal(size=3)
    np.testing.assert_allclose(hermite_vector(n, x), hermite_vector(n, x, np.eye(3)),
                               rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n", range(2, 6))
def test_hermite_vector_is_symmetric(n):
    x = np.array([0.4, -0.9])
    cov = np.array([[1.5, 0.3], [0.3, 0.8]])
    h = hermite_vector(n, x, cov)
    for i in range(n - 1):
        np.testing.assert_allclose(commutation_apply(IndexPermutation.swap((2,) * n, i, i + 1), h), h,
                                   rtol=1e-12, atol=1e-12)


def test_hermite_vector_errors():
    with pytest.raises(ValueError):
        hermite_vector(2, np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ValueError):
        hermite_vector(9, np.zeros(2))
    with pytest.raises(ValueError):
        hermite_vector(2, np.zeros(3), np.eye(2))


def test_gaussian_pdf_nd_values():
    assert gaussian_pdf_nd([0.0], [[1.0]]) == pytest.approx(0.398942, abs=1e-6)
    assert gaussian_pdf_nd([0.0, 0.0]) == pytest.approx(1 / (2 * np.pi), rel=1e-15)
    cov = np.array([[2.0, 0.6], [0.6, 1.0]])
    val, _ = integrate.dblquad(lambda y, x: gaussian_pdf_nd([x, y], cov), -12, 12, -12, 12,
                               epsabs=1e-9)
    assert val == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(ValueError):
        gaussian_pdf_nd([0.0, 0.0], np.diag([1.0, -1.0]))


def test_alpha_all_zero():
    a = alpha_coefficients([np.zeros(2 ** k) for k in range(1, 7)])
    assert a[0].tolist() == [1.0]
    assert all(not np.any(v) for v in a[1:])


def test_alpha_matched_gaussian_reference():
    rng = np.random.default_rng(3)
    d3, d4, d6 = rng.normal(size=8), rng.normal(size=16), rng.normal(size=64)
    a = alpha_coefficients([np.zeros(2), np.zeros(4), d3, d4, np.zeros(32), d6])
    np.testing.assert_array_equal(a[3], d3)
    np.testing.assert_array_equal(a[4], d4)
    np.testing.assert_allclose(a[6], d6 + 10 * kron(d3, d3))


def test_alpha_exponential_collapse():
    a = alpha_coefficients([[1.0]])
    assert [float(v[0]) for v in a] == [1, 1, 1, 1, 1, 1, 1]
    # 1-D: alpha(k) are the moments of a distribution with cumulants delta
    a = alpha_coefficients([[0.0], [1.0]])
    assert [float(v[0]) for v in a] == [1, 0, 1, 0, 3, 0, 15]


def _moments_from_cumulants(kappa):
    from math import comb

    m = [1.0]
    for n in range(1, 7):
        m.append(sum(comb(n - 1, k - 1) * kappa[k - 1] * m[n - k] for k in range(1, n + 1)))
    return m


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=6, max_size=6))
def test_alpha_univariate_equals_moment_recursion(kappa):
    a = alpha_coefficients([[k] for k in kappa])
    np.testing.assert_allclose([float(v[0]) for v in a], _moments_from_cumulants(kappa),
                               rtol=1e-10, atol=1e-10)


def test_alpha_length_mismatch():
    with pytest.raises(ValueError):
        alpha_coefficients([np.zeros(2), np.zeros(3)])


def test_gca_zero_cumulants_is_gaussian():
    c = Cumulants1D(100, 0.5, 2.0, 0.0, 0.0)
    x = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(gca_density(x, c), gaussian_derivative_1d(0, x, 0.5, 2.0), rtol=1e-15)
    cv = CumulantVectors.gaussian(2)
    assert gca_density([0.3, 0.1], cv) == pytest.approx(gaussian_pdf_nd([0.3, 0.1]), rel=1e-15)


def test_gca_odd_term_vanishes_at_center():
    c = Cumulants1D(100, 0.0, 1.0, 0.5, 0.0)
    assert gca_density(0.0, c) == pytest.approx(PHI0, rel=1e-15)


@pytest.mark.parametrize("k3,k4,order", [(1.0, 1.0, 4), (-1.0, 0.5, 4), (0.7, -1.0, 6), (0.3, 0.2, 3)])
def test_gca_integrates_to_one(k3, k4, order):
    c = Cumulants1D(100, 0.2, 1.4, k3, k4)
    val, _ = integrate.quad(lambda t: gca_density(t, c, order, {5: 0.3, 6: -0.2}), -np.inf, np.inf,
                            epsabs=1e-12, epsrel=1e-12)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_gca_moments_reproduce_cumulants():
    c = Cumulants1D(100, 0.0, 1.0, 0.4, 0.3)
    m3, _ = integrate.quad(lambda t: t**3 * gca_density(t, c), -np.inf, np.inf)
    m4, _ = integrate.quad(lambda t: t**4 * gca_density(t, c), -np.inf, np.inf)
    assert m3 == pytest.approx(0.4, abs=1e-8)
    assert m4 - 3 == pytest.approx(0.3, abs=1e-8)


def test_gca_vector_collapses_to_scalar():
    c = Cumulants1D(100, 0.0, 1.0, 0.4, -0.3)
    cv = CumulantVectors(1, [1.0], [0.4], [-0.3])
    for x in (-1.3, 0.2, 2.1):
        assert gca_density([x], cv) == pytest.approx(gca_density(x, c), rel=1e-13)


def test_gca_vector_non_identity_covariance_1d():
    # a 1-D vector series with variance s^2 is the scalar series in units of s
    s = 1.5
    c = Cumulants1D(100, 0.0, s, 0.4, -0.3)
    cv = CumulantVectors(1, [s * s], [0.4], [-0.3])
    assert gca_density([0.9], cv) == pytest.approx(gca_density(0.9, c), rel=1e-13)


def test_gca_rejects_bad_order():
    with pytest.raises(ValueError):
        gca_density(0.0, Cumulants1D(10, 0.0, 1.0, 0.0, 0.0), max_order=7)
    with pytest.raises(TypeError):
        gca_density(0.0, {"k3": 0})
