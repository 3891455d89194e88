"""AMISE-based bandwidth selectors for Gaussian-kernel density estimation."""
from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .roughness import (
    C_THRESHOLD,
    derivative_coefficients,
    roughness_derivative_1d,
    roughness_derivative_nd,
    roughness_exrot_1d,
    roughness_exrot_nd,
)
from .stats import Cumulants1D, CumulantVectors

ROT_CONSTANT = (4.0 / 3.0) ** 0.2


@dataclass(frozen=True)
class KernelSpec:
    """Second moment and roughness constants of a kernel."""

    name: str = "gaussian"
    mu2: float = 1.0

    def roughness(self, d: int = 1) -> float:
        """``R(K) = ∫ K²``, equal to ``2^-d π^{-d/2}`` for the Gaussian."""
        return 1.0 / (2.0**d * pi ** (d / 2))

    def deriv_roughness(self, d: int = 1) -> float:
        """``∫ |∇K|²``, equal to ``d / (2^{d+1} π^{d/2})`` for the Gaussian."""
        return d / (2.0 ** (d + 1) * pi ** (d / 2))


GAUSSIAN = KernelSpec()


@dataclass(frozen=True)
class BandwidthResult:
    rule: str
    h: float | np.ndarray
    c_factor: float
    fallback_used: bool
    d: int
    n: int

    def to_dict(self) -> dict:
        h = self.h.tolist() if isinstance(self.h, np.ndarray) else self.h
        return {"rule": self.rule, "h": h, "c_factor": self.c_factor,
                "fallback_used": self.fallback_used, "d": self.d, "n": self.n}


def _check_n(n: int) -> None:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")


def _guard(c: float) -> tuple[float, bool]:
    if not c > C_THRESHOLD:
        return 1.0, True
    return c, False


def h_amise(kernel: KernelSpec, roughness: float, n: int, d: int = 1) -> float:
    """``(R(K) / (μ₂² R n))^{1/(d+4)}``."""
    _check_n(n)
    if not roughness > 0:
        raise ValueError("roughness must be positive")
    return (kernel.roughness(d) / (kernel.mu2**2 * roughness * n)) ** (1.0 / (d + 4))


def h_rot_1d(sigma: float, n: int) -> BandwidthResult:
    """Gaussian rule of thumb ``(4/3)^{1/5} σ n^{-1/5}``."""
    _check_n(n)
    return BandwidthResult("rot", ROT_CONSTANT * sigma * n ** -0.2, 1.0, False, 1, n)


def h_exrot_1d(c: Cumulants1D, n: int) -> BandwidthResult:
    """``(4/3)^{1/5} σ (C n)^{-1/5}`` with the Gram-Charlier correction ``C``."""
    _check_n(n)
    cf, fell_back = _guard(roughness_exrot_1d(c).c_factor)
    return BandwidthResult("exrot", ROT_CONSTANT * c.sigma * (cf * n) ** -0.2,
                           cf, fell_back, 1, n)


def _nd_rule(c: float, n: int, d: int) -> float:
    return (4.0 / ((2 + d) * (c * n))) ** (1.0 / (4 + d))


def h_rot_nd(sigma: float, n: int, d: int) -> BandwidthResult:
    """``(4 / ((d+2) n))^{1/(d+4)} σ``."""
    _check_n(n)
    if d < 1:
        raise ValueError("d must be >= 1")
    return BandwidthResult("rot", _nd_rule(1.0, n, d) * sigma, 1.0, False, d, n)


def h_exrot_nd(cv: CumulantVectors, n: int) -> BandwidthResult:
    """Scalar bandwidth for ``H = h I`` in whitened space.

    ``h = (4 / ((d+2) C n))^{1/(d+4)}``, which reduces to :func:`h_rot_nd`
    with ``σ = 1`` when ``C = 1``.
    """
    _check_n(n)
    cf, fell_back = _guard(roughness_exrot_nd(cv).c_factor)
    return BandwidthResult("exrot", _nd_rule(cf, n, cv.d), cf, fell_back, cv.d, n)


def h_exrot_per_axis(cv: CumulantVectors, per_axis_roughness, n: int,
                     kernel: KernelSpec = GAUSSIAN) -> BandwidthResult:
    """Diagonal bandwidth ``h_i = (R(K) / (μ₂² R_i n))^{1/(d+4)}``.

    Uses the one-shot approximation ``det H ≈ h_i^d`` for each axis.
    """
    r = np.asarray(per_axis_roughness, dtype=np.float64).ravel()
    if r.size != cv.d:
        raise ValueError(f"need {cv.d} per-axis roughness values, got {r.size}")
    if np.any(~(r > 0)):
        raise ValueError("per-axis roughness must be positive")
    h = np.array([h_amise(kernel, ri, n, cv.d) for ri in r])
    return BandwidthResult("exrot", h, float("nan"), False, cv.d, n)


# first-derivative estimation: h^{d+6} = (d+2) ∫|∇K|² / (μ₂² R n)

def _deriv_rule(c_norm: float, n: int, d: int) -> float:
    return (4.0 / ((d + 4) * (c_norm * n))) ** (1.0 / (d + 6))


def h_rot_deriv_1d(sigma: float, n: int) -> BandwidthResult:
    """Gaussian-reference bandwidth for the first derivative, ``(4/(5n))^{1/7} σ``."""
    _check_n(n)
    return BandwidthResult("rot_deriv", _deriv_rule(1.0, n, 1) * sigma,
                           float(derivative_coefficients(1)["gaussian"]), False, 1, n)


def h_exrot_deriv_1d(c: Cumulants1D, n: int) -> BandwidthResult:
    """``σ (1.5 / (C n))^{1/7}``; ``C = 1.875`` for Gaussian data."""
    _check_n(n)
    rep = roughness_derivative_1d(c)
    cf, fell_back = _guard(rep.c_factor)
    gauss = float(derivative_coefficients(1)["gaussian"])
    if fell_back:
        cf = gauss
    return BandwidthResult("exrot_deriv", _deriv_rule(cf / gauss, n, 1) * c.sigma,
                           cf, fell_back, 1, n)


def h_rot_deriv_nd(sigma: float, n: int, d: int) -> BandwidthResult:
    """``(4 / ((d+4) n))^{1/(d+6)} σ``."""
    _check_n(n)
    if d < 1:
        raise ValueError("d must be >= 1")
    gauss = float(derivative_coefficients(d)["gaussian"]) if d <= 3 else float("nan")
    return BandwidthResult("rot_deriv", _deriv_rule(1.0, n, d) * sigma, gauss, False, d, n)


def h_exrot_deriv_nd(cv: CumulantVectors, n: int) -> BandwidthResult:
    """Whitened-space first-derivative bandwidth, ``(4 / ((d+4) C' n))^{1/(d+6)}``.

    ``C'`` is the correction factor divided by its Gaussian value, so zero
    cumulants give :func:`h_rot_deriv_nd` with ``σ = 1``.
    """
    _check_n(n)
    rep = roughness_derivative_nd(cv)
    gauss = float(derivative_coefficients(cv.d)["gaussian"])
    cf, fell_back = _guard(rep.c_factor)
    if fell_back:
        cf = gauss
    return BandwidthResult("exrot_deriv", _deriv_rule(cf / gauss, n, cv.d), cf,
                           fell_back, cv.d, n)
