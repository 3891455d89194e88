import csv
import io
from math import pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exrot.bandwidth import GAUSSIAN, h_amise, h_exrot_nd
from exrot.bench import imse
from exrot.hermite import gaussian_pdf_nd
from exrot.kde import (
    DensityEstimate,
    default_grid,
    grid_nd,
    kde_1d,
    kde_derivative_1d,
    kde_nd,
    kde_whitened,
    write_estimate_csv,
)
from exrot.mixtures import marron_wand, mixture_sample
from exrot.stats import cumulant_vectors, whiten

PHI0 = 1 / np.sqrt(2 * np.pi)


def brute(samples, h, grid, r=0):
    u = (np.asarray(grid)[:, None] - np.asarray(samples)[None, :]) / h
    phi = np.exp(-0.5 * u * u) / np.sqrt(2 * pi)
    poly = {0: 1.0, 1: -u, 2: u * u - 1}[r]
    return (poly * phi).sum(axis=1) / (len(samples) * h ** (r + 1))


def test_single_bump():
    est = kde_1d([0.0], 1.0, [0.0])
    assert est.values[0] == pytest.approx(0.398942, abs=1e-6)
    assert est.n == 1 and est.h == 1.0


@pytest.mark.parametrize("r", [0, 1, 2])
def test_matches_unwindowed_sum(r):
    x = np.random.default_rng(0).standard_cauchy(3000)
    grid = np.linspace(-10, 10, 1001)
    est = kde_derivative_1d(x, 0.3, r, grid)
    ref = brute(x, 0.3, grid, r)
    np.testing.assert_allclose(est.values, ref, rtol=1e-11, atol=1e-13 * np.abs(ref).max())


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=200), st.floats(0.01, 5.0))
def test_integrates_to_one(samples, h):
    est = kde_1d(samples, h, default_grid(samples, h, 20001))
    assert np.trapezoid(est.values, est.grid) == pytest.approx(1.0, abs=1e-3)
    assert np.all(est.values >= 0)


def test_default_grid_layout():
    g = default_grid([0.0, 1.0], 0.1)
    assert g.size == 4096 and g[0] == pytest.approx(-0.5) and g[-1] == pytest.approx(1.5)
    assert np.all(np.diff(g) > 0)
    assert kde_1d([0.0, 1.0], 0.1).grid.size == 4096


def test_errors():
    with pytest.raises(ValueError):
        kde_1d([0.0], 0.0)
    with pytest.raises(ValueError):
        kde_1d([], 1.0)
    with pytest.raises(ValueError):
        kde_derivative_1d([0.0], 1.0, 3)
    with pytest.raises(ValueError):
        kde_nd(np.zeros((3, 2)), [1.0, -1.0], np.zeros((1, 2)))


def test_derivative_r0_is_kde():
    x = np.random.default_rng(1).normal(size=500)
    np.testing.assert_array_equal(kde_derivative_1d(x, 0.2, 0).values, kde_1d(x, 0.2).values)


def test_derivative_antisymmetry():
    x = np.random.default_rng(2).normal(size=300)
    sym = np.concatenate([x, -x])
    assert abs(kde_derivative_1d(sym, 0.25, 1, [0.0]).values[0]) < 1e-14
    assert abs(kde_derivative_1d(sym + 3.0, 0.25, 1, [3.0]).values[0]) < 1e-12


@pytest.mark.parametrize("r", [1, 2])
def test_derivative_vs_finite_difference(r):
    x = np.random.default_rng(3).normal(size=2000)
    grid, eps = np.linspace(-2, 2, 41), 1e-5
    lo = kde_derivative_1d(x, 0.3, r - 1, grid - eps).values
    hi = kde_derivative_1d(x, 0.3, r - 1, grid + eps).values
    fd = (hi - lo) / (2 * eps)
    est = kde_derivative_1d(x, 0.3, r, grid).values
    np.testing.assert_allclose(est, fd, rtol=1e-3, atol=1e-3 * np.abs(est).max())


def test_derivative_is_analytic_derivative():
    x = np.random.default_rng(4).normal(size=1000)
    grid = np.linspace(-3, 3, 101)
    u = (grid[:, None] - x[None, :]) / 0.2
    analytic = (-u * np.exp(-0.5 * u * u)).sum(axis=1) / (x.size * 0.2**2 * np.sqrt(2 * pi))
    np.testing.assert_allclose(kde_derivative_1d(x, 0.2, 1, grid).values, analytic, rtol=1e-12, atol=1e-15)


def test_mse_curve_minimizer_near_amise():
    n, truth = 10_000, marron_wand(1)
    hs = np.linspace(0.08, 0.5, 22)
    mise = np.zeros_like(hs)
    grid = np.linspace(-8, 8, 2048)
    for t in range(12):
        x = mixture_sample(truth, n, np.random.SeedSequence([77, t]))
        for i, h in enumerate(hs):
            mise[i] += imse(kde_1d(x, h, grid), truth)
    best = hs[np.argmin(mise)]
    assert mise[0] > mise.min() and mise[-1] > mise.min()
    h_opt = h_amise(GAUSSIAN, 3 / (8 * np.sqrt(pi)), n)
    assert abs(best - h_opt) / h_opt < 0.2


def test_kde_nd_single_sample_and_product_identity():
    assert kde_nd(np.zeros((1, 2)), [1.0, 1.0], [[0.0, 0.0]]).values[0] == pytest.approx(1 / (2 * pi))
    s = np.array([[0.3, -0.7]])
    pts = grid_nd([-2, -2], [2, 2], 9)
    v = kde_nd(s, [0.4, 0.9], pts).values
    m1 = kde_1d(s[:, 0], 0.4, pts[:, 0]).values
    m2 = kde_1d(s[:, 1], 0.9, pts[:, 1]).values
    np.testing.assert_allclose(v, m1 * m2, rtol=1e-13)


def test_kde_nd_scalar_h_and_d1():
    x = np.random.default_rng(5).normal(size=(200, 2))
    pts = grid_nd([-1, -1], [1, 1], 5)
    np.testing.assert_array_equal(kde_nd(x, 0.3, pts).values, kde_nd(x, [0.3, 0.3], pts).values)
    g = np.linspace(-2, 2, 7)
    np.testing.assert_allclose(kde_nd(x[:, :1], 0.3, g[:, None]).values, kde_1d(x[:, 0], 0.3, g).values,
                               rtol=1e-13)


def test_grid_nd_is_lexicographic():
    g = grid_nd([0, 0], [1, 2], 3)
    assert g.shape == (9, 2)
    assert g[:3].tolist() == [[0, 0], [0, 1], [0, 2]]


def test_kde_nd_exrot_beats_naive_h():
    rng = np.random.default_rng(6)
    white, _ = whiten(rng.standard_normal((10_000, 2)))
    h = h_exrot_nd(cumulant_vectors(white), 10_000).h
    pts = grid_nd([-5, -5], [5, 5], 64)
    truth = np.exp(-0.5 * (pts**2).sum(axis=1)) / (2 * pi)
    cell = (10 / 63) ** 2

    def ise(hh):
        return ((kde_nd(white, hh, pts).values - truth) ** 2).sum() * cell

    base = ise(h)
    assert base < ise(3 * h) and base < ise(h / 3)


def test_kde_whitened_recovers_correlated_density():
    cov = np.array([[2.0, 0.9], [0.9, 1.0]])
    x = np.random.default_rng(7).multivariate_normal([1.0, -1.0], cov, size=40_000)
    pts = np.array([[1.0, -1.0], [2.0, 0.0]])
    est = kde_whitened(x, 0.15, pts)
    ref = [gaussian_pdf_nd(p - [1.0, -1.0], cov) for p in pts]
    np.testing.assert_allclose(est.values, ref, rtol=0.05)


def test_csv_export(tmp_path):
    est = DensityEstimate(np.array([0.0, 0.5]), np.array([0.25, 1 / 3]), 0.1, 2)
    path = tmp_path / "est.csv"
    est.to_csv(path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["point", "value"]
    assert float(rows[2][1]) == 1 / 3
    buf = io.StringIO()
    write_estimate_csv(est, buf)
    assert buf.getvalue() == path.read_text()
    est2 = DensityEstimate(grid_nd([0, 0], [1, 1], 2), np.ones(4), np.array([1.0, 1.0]), 1)
    buf = io.StringIO()
    write_estimate_csv(est2, buf)
    assert buf.getvalue().splitlines()[0] == "x1,x2,value"
