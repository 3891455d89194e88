"""Closed-form roughness functionals under a fourth-order Gram-Charlier fit.

Every coefficient is assembled from one primitive, the radial Hermite
bracket

    B(m, n, d) = pi^{-d/2} ∫ exp(-|x|^2) He_m(|x|) He_n(|x|) dx,

evaluated term by term with ``pi^{-d/2} ∫ |x|^k exp(-|x|^2) dx =
d (d+2) ... (d+k-2) / 2^{k/2}`` for even ``k`` (zero for odd ``k``).  The
brackets are exact rationals; :func:`constants_table` cross-checks each one
against adaptive quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gamma, pi, sqrt

import numpy as np
from scipy import integrate

from .stats import Cumulants1D, CumulantVectors
from .tensor import delta2, kron, kron_power

MAX_DIM = 3
C_THRESHOLD = 1e-6
_SQRT_PI = sqrt(pi)


@dataclass(frozen=True)
class RoughnessReport:
    """``value = gaussian_base * c_factor``; ``terms`` breaks ``c_factor`` down."""

    value: float
    c_factor: float
    terms: dict = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return not self.c_factor > C_THRESHOLD


# ---------------------------------------------------------------- primitives

@lru_cache(maxsize=None)
def _hermite_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of He_n, lowest power first."""
    prev, cur = (1,), (0, 1)
    if n == 0:
        return prev
    for k in range(1, n):
        nxt = [0] + list(cur)
        for i, c in enumerate(prev):
            nxt[i] -= k * c
        prev, cur = cur, tuple(nxt)
    return cur


def _poly_mul(a, b) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _radial_moment(k: int, d: int) -> Fraction:
    # pi^{-d/2} ∫ |x|^k exp(-|x|^2) dx over R^d
    if k % 2:
        return Fraction(0)
    out = Fraction(1)
    for j in range(k // 2):
        out *= Fraction(d + 2 * j, 2)
    return out


def _check_order(*orders: int, top: int = 7) -> None:
    for m in orders:
        if not 0 <= m <= top:
            raise ValueError(f"Hermite order must be in 0..{top}, got {m}")


def _check_dim(d: int) -> None:
    if not 1 <= d <= MAX_DIM:
        raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {d}")


@lru_cache(maxsize=None)
def hermite_bracket(m: int, n: int, d: int) -> Fraction:
    """Exact radial Hermite bracket ``B(m, n, d)``."""
    _check_order(m, n)
    if d < 1:
        raise ValueError("d must be >= 1")
    prod = _poly_mul(_hermite_coeffs(m), _hermite_coeffs(n))
    return sum((a * _radial_moment(k, d) for k, a in enumerate(prod)), Fraction(0))


def gaussian_moment_integral(n: int, a: float) -> float:
    """``∫ x^n exp(-a x^2) dx`` over the real line."""
    if a <= 0:
        raise ValueError("a must be positive")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n % 2:
        return 0.0
    dfact = 1
    for j in range(n - 1, 0, -2):
        dfact *= j
    return dfact / (2.0 * a) ** (n // 2) * sqrt(pi / a)


def hermite_cross_integral_1d(m: int, n: int, sigma: float = 1.0) -> float:
    """``∫ G(x; 0, sigma)^2 He_m(x/sigma) He_n(x/sigma) dx``."""
    _check_order(m, n)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return float(hermite_bracket(m, n, 1)) / (2.0 * _SQRT_PI * sigma)


# name -> (m, n, multiplicity, extra power of 1/sigma from the cumulant scaling)
T_TABLE = {
    "T1": (2, 2, 1, 0),
    "T2": (5, 5, 1, 6),
    "T3": (6, 6, 1, 8),
    "T4": (2, 5, 2, 3),
    "T5": (5, 6, 2, 7),
    "T6": (2, 6, 2, 4),
}


def t_integrals_1d(sigma: float = 1.0) -> dict[str, float]:
    """The six integrals entering the univariate R(f'') expansion.

    Each carries the ``sigma^-4`` of the two second derivatives, the power
    of ``1/sigma`` that accompanies its cumulants, and a factor 2 for the
    cross products.  T4 and T5 vanish by parity.
    """
    out = {}
    for name, (m, n, mult, extra) in T_TABLE.items():
        out[name] = mult * hermite_cross_integral_1d(m, n, sigma) * sigma ** (-4 - extra)
    return out


def gaussian_vector_moment_integral(n: int, d: int) -> float:
    """Coefficient of ``pi^{d/2} c(2,d)^{⊗n/2}`` in ``∫ x^{⊗n} exp(-x'x) dx``.

    This is the ``delta_2``-contracted coefficient
    ``d (d+2) ... (d+n-2) / 2^{n/2}`` for even ``n`` and zero for odd ``n``.
    """
    if not 0 <= n <= 12:
        raise ValueError("n must be in 0..12")
    _check_dim(d)
    return float(_radial_moment(n, d))


def radial_moment_quadrature(k: int, d: int) -> float:
    """Quadrature counterpart of :func:`gaussian_vector_moment_integral`."""
    surface = 2.0 * pi ** (d / 2) / gamma(d / 2)
    val, _ = integrate.quad(lambda r: r ** (k + d - 1) * np.exp(-r * r), 0, np.inf,
                            epsabs=1e-13, epsrel=1e-13)
    return surface * val / pi ** (d / 2)


def hermite_bracket_quadrature(m: int, n: int, d: int) -> float:
    """Adaptive-quadrature value of ``B(m, n, d)`` in radial coordinates."""
    surface = 2.0 * pi ** (d / 2) / gamma(d / 2)
    f = lambda r: r ** (d - 1) * np.exp(-r * r) * _he(m, r) * _he(n, r)
    if d == 1:
        # the radial form on [0, inf) only sees the even part
        f = lambda r: np.exp(-r * r) * _he(m, r) * _he(n, r)
        val, _ = integrate.quad(f, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
        return val / _SQRT_PI
    g = lambda r: 0.5 * (f(r) + f(-r) * (-1) ** (d - 1))
    val, _ = integrate.quad(g, 0, np.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
    return surface * val / pi ** (d / 2)


def _he(n: int, r):
    return sum(c * r**k for k, c in enumerate(_hermite_coeffs(n)))


# ---------------------------------------------------------------- coefficients

def _density_groups(d: int) -> dict[str, Fraction]:
    a1 = hermite_bracket(2, 2, d)
    return {
        "gaussian": a1,
        "k3": hermite_bracket(5, 5, d) / 36 / a1,
        "k4_sq": hermite_bracket(6, 6, d) / 576 / a1,
        "k4_cross": 2 * hermite_bracket(2, 6, d) / 24 / a1,
    }


def _derivative_groups(d: int) -> dict[str, Fraction]:
    return {
        "gaussian": hermite_bracket(3, 3, d),
        "k3": hermite_bracket(6, 6, d) / 36,
        "k4_sq": hermite_bracket(7, 7, d) / 576,
        "k4_cross": 2 * hermite_bracket(3, 7, d) / 24,
    }


def density_coefficients(d: int) -> dict[str, Fraction]:
    """Exact normalized coefficients of the R(f'') correction factor."""
    _check_dim(d)
    return _density_groups(d)


def derivative_coefficients(d: int) -> dict[str, Fraction]:
    """Exact coefficients of the R(f''') correction factor."""
    _check_dim(d)
    return _derivative_groups(d)


def constants_table(dims=(1, 2, 3)) -> list[dict]:
    """Every coefficient with its quadrature residual, for auditing.

    Bracket rows compare against radial quadrature; assembled coefficients
    inherit the worst residual of the brackets they are built from.
    """
    rows = []
    used = {
        "density": [(2, 2), (5, 5), (6, 6), (2, 6)],
        "derivative": [(3, 3), (6, 6), (7, 7), (3, 7)],
    }
    for d in dims:
        _check_dim(d)
        resid = {}
        for m, n in sorted({p for v in used.values() for p in v}):
            exact = float(hermite_bracket(m, n, d))
            quad = hermite_bracket_quadrature(m, n, d)
            resid[(m, n)] = abs(quad - exact) / max(1.0, abs(exact))
            rows.append({"d": d, "coefficient_name": f"bracket_{m}_{n}",
                         "value": exact, "oracle_residual": resid[(m, n)]})
        for group, coeffs in (("density", _density_groups(d)),
                              ("derivative", _derivative_groups(d))):
            worst = max(resid[p] for p in used[group])
            for name, val in coeffs.items():
                rows.append({"d": d, "coefficient_name": f"{group}_{name}",
                             "value": float(val), "oracle_residual": worst})
    return rows


# ---------------------------------------------------------------- contractions

def cumulant_contractions(cv: CumulantVectors) -> dict[str, float]:
    """``c3⊗c3 · δ₂^{⊗3}``, ``c4⊗c4 · δ₂^{⊗4}`` and ``c4 · δ₂^{⊗2}``."""
    dl = delta2(cv.d)
    return {
        "s3": float(kron(cv.c3, cv.c3) @ kron_power(dl, 3)),
        "s4": float(kron(cv.c4, cv.c4) @ kron_power(dl, 4)),
        "sx": float(cv.c4 @ kron_power(dl, 2)),
    }


def _assemble(base: float, coeffs: dict, s3: float, s4: float, sx: float,
              lead: float) -> RoughnessReport:
    terms = {
        "gaussian_base": base,
        "k3_term": float(coeffs["k3"]) * s3,
        "k4_sq_term": float(coeffs["k4_sq"]) * s4,
        "k4_cross_term": float(coeffs["k4_cross"]) * sx,
    }
    c = lead + terms["k3_term"] + terms["k4_sq_term"] + terms["k4_cross_term"]
    return RoughnessReport(base * c, c, terms)


def roughness_exrot_1d(c: Cumulants1D) -> RoughnessReport:
    """``R(f'')`` of the fourth-order Gram-Charlier fit to ``c``.

    ``C = 1 + (315/288) k3²/σ⁶ + (3465/9216) k4²/σ⁸ + (35/48) k4/σ⁴`` and the
    Gaussian base is ``3 / (8 √π σ⁵)``.
    """
    s = c.sigma
    coeffs = _density_groups(1)
    base = 3.0 / (8.0 * _SQRT_PI * s**5)
    return _assemble(base, coeffs, c.k3**2 / s**6, c.k4**2 / s**8, c.k4 / s**4, 1.0)


def roughness_exrot_nd(cv: CumulantVectors) -> RoughnessReport:
    """``R(f'')`` for whitened d-variate data, normalized so Gaussian data gives C = 1.

    The Gaussian base is ``(d+2) / (2^{d+2} π^{d/2})``.
    """
    d = cv.d
    _check_dim(d)
    coeffs = _density_groups(d)
    base = (d + 2) / (2.0 ** (d + 2) * pi ** (d / 2))
    s = cumulant_contractions(cv)
    return _assemble(base, coeffs, s["s3"], s["s4"], s["sx"], 1.0)


def roughness_derivative_1d(c: Cumulants1D) -> RoughnessReport:
    """``R(f''')`` of the Gram-Charlier fit, for first-derivative bandwidths.

    ``value = C / (2 √π σ⁷)`` with
    ``C = 15/8 + (10395/2304) k3²/σ⁶ + (135135/73728) k4²/σ⁸ + (1890/768) k4/σ⁴``.
    """
    s = c.sigma
    coeffs = _derivative_groups(1)
    base = 1.0 / (2.0 * _SQRT_PI * s**7)
    return _assemble(base, coeffs, c.k3**2 / s**6, c.k4**2 / s**8, c.k4 / s**4,
                     float(coeffs["gaussian"]))


def roughness_derivative_nd(cv: CumulantVectors) -> RoughnessReport:
    """d-variate counterpart of :func:`roughness_derivative_1d`; base ``2^-d π^{-d/2}``."""
    d = cv.d
    _check_dim(d)
    coeffs = _derivative_groups(d)
    base = 1.0 / (2.0**d * pi ** (d / 2))
    s = cumulant_contractions(cv)
    return _assemble(base, coeffs, s["s3"], s["s4"], s["sx"], float(coeffs["gaussian"]))
