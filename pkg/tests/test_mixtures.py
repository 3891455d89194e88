import json

import numpy as np
import pytest
from scipy import integrate

from exrot.mixtures import (
    RNG_ALGORITHM,
    NormalMixture,
    catalogue_json,
    marron_wand,
    mixture_derivative,
    mixture_pdf,
    mixture_sample,
    mixture_true_roughness,
)


@pytest.mark.parametrize("density_id", range(1, 16))
def test_catalogue_densities_integrate_to_one(density_id):
    m = marron_wand(density_id)
    lo, hi = m.support()
    val, _ = integrate.quad(lambda t: mixture_pdf(m, t), lo, hi, points=sorted(set(m.means)),
                            limit=2000, epsabs=1e-12)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_catalogue_names_and_bounds():
    assert marron_wand(1).name == "Gaussian"
    assert marron_wand(10).name == "Claw"
    assert len(marron_wand(10).components) == 6
    for bad in (0, 16):
        with pytest.raises(ValueError):
            marron_wand(bad)


def test_catalogue_json_roundtrip():
    data = json.loads(catalogue_json())
    assert [d["id"] for d in data] == list(range(1, 16))
    assert data[4]["components"][1] == {"w": 0.9, "mu": 0.0, "sigma": 0.1}


def test_mixture_validation():
    with pytest.raises(ValueError):
        NormalMixture((0.5, 0.4), (0.0, 1.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        NormalMixture((1.0,), (0.0,), (0.0,))


def test_standard_normal_values():
    m = marron_wand(1)
    assert mixture_pdf(m, 0.0) == pytest.approx(1 / np.sqrt(2 * np.pi), rel=1e-15)
    assert m.cumulants() == pytest.approx((0.0, 1.0, 0.0, 0.0))
    # R(f'') of N(0,1) is 3/(8 sqrt(pi))
    assert mixture_true_roughness(m, 2) == pytest.approx(3 / (8 * np.sqrt(np.pi)), rel=1e-9)
    assert mixture_true_roughness(m, 3) == pytest.approx(15 / (16 * np.sqrt(np.pi)), rel=1e-9)


@pytest.mark.parametrize("density_id", [2, 3, 8, 12])
def test_moments_match_quadrature(density_id):
    m = marron_wand(density_id)
    lo, hi = m.support()
    mean = m.raw_moment(1)
    for k in (2, 3, 4):
        val, _ = integrate.quad(lambda t: (t - mean) ** k * mixture_pdf(m, t), lo, hi,
                                points=sorted(set(m.means)), limit=2000)
        assert m.central_moment(k) == pytest.approx(val, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_derivative_matches_finite_difference(order):
    m = marron_wand(2)
    x, eps = np.linspace(-2, 2, 9), 1e-4
    fd = (mixture_derivative(m, x + eps, order - 1) - mixture_derivative(m, x - eps, order - 1)) / (2 * eps)
    np.testing.assert_allclose(mixture_derivative(m, x, order), fd, rtol=1e-6, atol=1e-7)


def test_sampling_is_seeded_and_pcg64():
    assert RNG_ALGORITHM == "numpy.random.PCG64"
    m = marron_wand(5)
    a = mixture_sample(m, 1000, 7)
    np.testing.assert_array_equal(a, mixture_sample(m, 1000, 7))
    assert not np.array_equal(a, mixture_sample(m, 1000, 8))
    seq = np.random.SeedSequence([1, 2, 3])
    np.testing.assert_array_equal(mixture_sample(m, 10, seq), mixture_sample(m, 10, np.random.SeedSequence([1, 2, 3])))


def test_sample_moments_track_truth():
    m = marron_wand(2)
    x = mixture_sample(m, 200_000, 3)
    mean, var, _, _ = m.cumulants()
    assert x.mean() == pytest.approx(mean, abs=5 * np.sqrt(var / x.size))
    assert x.var() == pytest.approx(var, rel=0.02)
