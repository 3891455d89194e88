"""The Marron-Wand normal-mixture test densities.

Parameters follow Marron & Wand (1992), "Exact mean integrated squared
error", Table 1.  Each density is a finite mixture ``sum_i w_i N(mu_i, s_i^2)``
with exact pdf and derivatives.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction as F
from math import comb

import numpy as np
from scipy import integrate

from .hermite import hermite_1d

RNG_ALGORITHM = "numpy.random.PCG64"

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class NormalMixture:
    """Weights, means and scales of a univariate normal mixture."""

    weights: tuple[float, ...]
    means: tuple[float, ...]
    scales: tuple[float, ...]
    name: str = ""

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        mu = tuple(float(x) for x in self.means)
        s = tuple(float(x) for x in self.scales)
        if not (len(w) == len(mu) == len(s)) or not w:
            raise ValueError("weights, means and scales must be non-empty and equally long")
        if any(x <= 0 for x in s):
            raise ValueError("all component scales must be positive")
        if any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"weights must be non-negative and sum to 1, got {sum(w)!r}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "scales", s)

    @property
    def components(self):
        return list(zip(self.weights, self.means, self.scales))

    def support(self, width: float = 10.0) -> tuple[float, float]:
        """Interval ``[min mu - width*max s, max mu + width*max s]``."""
        smax = max(self.scales)
        return min(self.means) - width * smax, max(self.means) + width * smax

    def raw_moment(self, k: int) -> float:
        """Exact ``E[X^k]``."""
        total = 0.0
        for w, mu, s in self.components:
            # E[(mu + s Z)^k] with E[Z^j] = (j-1)!! for even j
            acc = 0.0
            for j in range(0, k + 1, 2):
                acc += comb(k, j) * mu ** (k - j) * s**j * _double_factorial(j - 1)
            total += w * acc
        return total

    def central_moment(self, k: int) -> float:
        m = self.raw_moment(1)
        total = 0.0
        for w, mu, s in self.components:
            c = mu - m
            acc = 0.0
            for j in range(0, k + 1, 2):
                acc += comb(k, j) * c ** (k - j) * s**j * _double_factorial(j - 1)
            total += w * acc
        return total

    def cumulants(self) -> tuple[float, float, float, float]:
        """Exact ``(mean, variance, k3, k4)``."""
        m2 = self.central_moment(2)
        return (
            self.raw_moment(1),
            m2,
            self.central_moment(3),
            self.central_moment(4) - 3.0 * m2**2,
        )

    def to_dict(self, density_id: int | None = None) -> dict:
        out = {
            "name": self.name,
            "components": [{"w": w, "mu": mu, "sigma": s} for w, mu, s in self.components],
        }
        if density_id is not None:
            out = {"id": density_id, **out}
        return out


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _mix(name, comps) -> NormalMixture:
    # exact rationals so the weight-sum check holds to the last bit
    ws = [F(w) for w, _, _ in comps]
    total = sum(ws)
    w = [float(x / total) for x in ws]
    # absorb rounding of the float conversion into the largest weight
    drift = 1.0 - sum(w)
    w[int(np.argmax(w))] += drift
    return NormalMixture(tuple(w), tuple(float(m) for _, m, _ in comps),
                         tuple(float(s) for _, _, s in comps), name)


def _catalogue() -> dict[int, NormalMixture]:
    r = F
    cat = {
        1: _mix("Gaussian", [(1, 0, 1)]),
        2: _mix("Skewed Unimodal", [
            (r(1, 5), 0, 1), (r(1, 5), 0.5, 2 / 3), (r(3, 5), 13 / 12, 5 / 9)]),
        3: _mix("Strongly Skewed", [
            (r(1, 8), 3 * ((2 / 3) ** l - 1), (2 / 3) ** l) for l in range(8)]),
        4: _mix("Kurtotic Unimodal", [(r(2, 3), 0, 1), (r(1, 3), 0, 0.1)]),
        5: _mix("Outlier", [(r(1, 10), 0, 1), (r(9, 10), 0, 0.1)]),
        6: _mix("Bimodal", [(r(1, 2), -1, 2 / 3), (r(1, 2), 1, 2 / 3)]),
        7: _mix("Separated Bimodal", [(r(1, 2), -1.5, 0.5), (r(1, 2), 1.5, 0.5)]),
        8: _mix("Skewed Bimodal", [(r(3, 4), 0, 1), (r(1, 4), 1.5, 1 / 3)]),
        9: _mix("Trimodal", [
            (r(9, 20), -1.2, 0.6), (r(9, 20), 1.2, 0.6), (r(1, 10), 0, 0.25)]),
        10: _mix("Claw", [(r(1, 2), 0, 1)]
                 + [(r(1, 10), l / 2 - 1, 0.1) for l in range(5)]),
        11: _mix("Double Claw", [(r(49, 100), -1, 2 / 3), (r(49, 100), 1, 2 / 3)]
                 + [(r(1, 350), (l - 3) / 2, 0.01) for l in range(7)]),
        12: _mix("Asymmetric Claw", [(r(1, 2), 0, 1)]
                 + [(r(2) ** (1 - l) / 31, l + 0.5, 2.0 ** (-l) / 10) for l in range(-2, 3)]),
        13: _mix("Asymmetric Double Claw",
                 [(r(46, 100), 2 * l - 1, 2 / 3) for l in range(2)]
                 + [(r(1, 300), -l / 2, 0.01) for l in range(1, 4)]
                 + [(r(7, 300), l / 2, 0.07) for l in range(1, 4)]),
        14: _mix("Smooth Comb", [
            (r(2 ** (5 - l), 63), (65 - 96 * 0.5**l) / 21, (32 / 63) / 2**l)
            for l in range(6)]),
        15: _mix("Discrete Comb",
                 [(r(2, 7), (12 * l - 15) / 7, 2 / 7) for l in range(3)]
                 + [(r(1, 21), 2 * l / 7, 1 / 21) for l in range(8, 11)]),
    }
    return cat


_CATALOGUE = _catalogue()


def marron_wand(density_id: int) -> NormalMixture:
    """Benchmark density ``density_id`` (1 Gaussian ... 15 Discrete Comb)."""
    if density_id not in _CATALOGUE:
        raise ValueError(f"Marron-Wand density id must be in 1..15, got {density_id!r}")
    return _CATALOGUE[density_id]


def catalogue_json(indent: int | None = 2) -> str:
    return json.dumps([marron_wand(i).to_dict(i) for i in range(1, 16)], indent=indent)


def mixture_pdf(m: NormalMixture, x):
    return mixture_derivative(m, x, 0)


def mixture_derivative(m: NormalMixture, x, order: int):
    """Exact ``order``-th derivative of the mixture density at ``x``.

    Each component contributes ``w (-1)^n s^-n He_n(z) phi(z) / s`` with
    ``z = (x - mu) / s``.
    """
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    sign = -1.0 if order % 2 else 1.0
    for w, mu, s in m.components:
        z = (x - mu) / s
        out += w * sign * s ** (-order) * hermite_1d(order, z) * np.exp(-0.5 * z * z) / (s * _SQRT_2PI)
    return out if out.ndim else float(out)


def mixture_sample(m: NormalMixture, n: int, seed) -> np.ndarray:
    """``n`` i.i.d. draws: categorical component label, then a Gaussian draw.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts (an int or a
    ``SeedSequence``); the bit generator is PCG64.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = np.random.Generator(np.random.PCG64(seed))
    labels = rng.choice(len(m.weights), size=n, p=np.asarray(m.weights))
    z = rng.standard_normal(n)
    return np.asarray(m.means)[labels] + np.asarray(m.scales)[labels] * z


def mixture_true_roughness(m: NormalMixture, deriv_order: int = 2) -> float:
    """``∫ (f^(r))^2 dx`` by adaptive quadrature of the exact derivative."""
    if deriv_order not in (2, 3):
        raise ValueError("deriv_order must be 2 or 3")
    lo, hi = m.support()
    # split at component means so narrow spikes are not stepped over
    pts = sorted(set(m.means))
    val, err = integrate.quad(
        lambda t: mixture_derivative(m, t, deriv_order) ** 2,
        lo, hi, points=pts, epsabs=1e-10, epsrel=1e-10, limit=2000,
    )
    if not np.isfinite(val) or err > max(1e-8, 1e-8 * abs(val)):
        raise ArithmeticError(f"roughness quadrature did not converge (err={err:.3g})")
    return val
