"""Hermite polynomials, Gaussian derivatives and Gram-Charlier A densities."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .tensor import IndexPermutation, commutation_apply, kron, kron_power, vec

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def hermite_1d(n: int, z):
    """Probabilists' Hermite polynomial ``He_n(z)`` by three-term recurrence."""
    if n < 0:
        raise ValueError("Hermite order must be >= 0")
    z = np.asarray(z, dtype=np.float64)
    prev, cur = np.ones_like(z), z
    if n == 0:
        out = prev
    else:
        for k in range(1, n):
            prev, cur = cur, z * cur - k * prev
        out = cur
    return out if out.ndim else float(out)


def gaussian_derivative_1d(n: int, x, mu: float = 0.0, sigma: float = 1.0):
    """n-th derivative of the N(mu, sigma^2) density.

    Uses ``G^(n)(x) = (-1)^n sigma^-n He_n(z) G(x)`` with ``z = (x - mu) / sigma``.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    z = (np.asarray(x, dtype=np.float64) - mu) / sigma
    g = np.exp(-0.5 * z * z) / (sigma * _SQRT_2PI)
    out = (-1.0) ** n * sigma ** (-n) * np.asarray(hermite_1d(n, z)) * g
    return out if out.ndim else float(out)


def _check_spd(cov: np.ndarray) -> np.ndarray:
    cov = np.atleast_2d(np.asarray(cov, dtype=np.float64))
    if cov.shape[0] != cov.shape[1] or not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
        raise ValueError("covariance must be a symmetric square matrix")
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance is not positive definite") from exc
    return cov


def gaussian_pdf_nd(x, cov=None) -> float:
    """Zero-mean multivariate normal density, exponent ``-x' C^-1 x / 2``."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    d = x.size
    cov = np.eye(d) if cov is None else _check_spd(cov)
    if cov.shape[0] != d:
        raise ValueError("x and cov dimensions disagree")
    sol = np.linalg.solve(cov, x)
    _, logdet = np.linalg.slogdet(cov)
    return float(np.exp(-0.5 * x @ sol - 0.5 * logdet - 0.5 * d * np.log(2 * np.pi)))


def _hermite_identity(n: int, x: np.ndarray) -> np.ndarray:
    # identity covariance: entry (i1..in) is prod_k He_{#k}(x_k)
    d = x.size
    if n == 0:
        return np.ones(1)
    table = np.array([[hermite_1d(j, xk) for j in range(n + 1)] for xk in x])
    idx = np.indices((d,) * n).reshape(n, -1)
    out = np.ones(idx.shape[1])
    for k in range(d):
        out *= table[k, (idx == k).sum(axis=0)]
    return out


def _pair_insert(n: int, j: int, d: int) -> IndexPermutation:
    # undo P(n, j) -> (1, 2): factor 1 goes to slot n, factor 2 to slot j
    rest = [p for p in range(n) if p not in (n - 1, j - 1)]
    mapping = [n - 1, j - 1] + rest
    return IndexPermutation((d,) * n, tuple(mapping))


def hermite_vector(n: int, x, cov=None) -> np.ndarray:
    """d-variate Hermite polynomial ``H_n(x; C)`` as a ``d**n`` vector.

    ``H_0 = 1``, ``H_1 = x`` and for ``n > 1``::

        H_n = H_{n-1} ⊗ x - sum_j K^-1_{P(n,j)->(1,2)} (vec C ⊗ H_{n-2})

    With ``cov=None`` (identity) the product form of scalar Hermite
    polynomials is used directly.
    """
    if n < 0 or n > 8:
        raise ValueError("hermite_vector supports 0 <= n <= 8")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    d = x.size
    if cov is None:
        return _hermite_identity(n, x)
    cov = _check_spd(cov)
    if cov.shape[0] != d:
        raise ValueError("x and cov dimensions disagree")
    c2 = vec(cov)
    hs = [np.ones(1), x.copy()]
    for m in range(2, n + 1):
        base = kron(c2, hs[m - 2])
        acc = kron(hs[m - 1], x)
        for j in range(1, m):
            acc -= commutation_apply(_pair_insert(m, j, d), base)
        hs.append(acc)
    return hs[n]


def _apply_each_axis(mat: np.ndarray, v: np.ndarray, order: int) -> np.ndarray:
    # (M ⊗ M ⊗ ... ⊗ M) v without forming the Kronecker power
    d = mat.shape[0]
    t = v.reshape((d,) * order)
    for ax in range(order):
        t = np.moveaxis(np.tensordot(mat, t, axes=([1], [ax])), 0, ax)
    return t.ravel()


def alpha_coefficients(deltas: Sequence) -> list[np.ndarray]:
    """Coefficients ``alpha(0..6)`` of the generalized Gram-Charlier series.

    ``deltas[k-1]`` is the cumulant difference vector of order ``k`` (length
    ``d**k``), k = 1..6.  Missing trailing orders are treated as zero.
    """
    deltas = [np.atleast_1d(np.asarray(v, dtype=np.float64)).ravel() for v in deltas]
    if not deltas:
        raise ValueError("need at least the first-order delta")
    d = deltas[0].size
    deltas = deltas + [np.zeros(d ** k) for k in range(len(deltas) + 1, 7)]
    if len(deltas) > 6:
        raise ValueError("only orders up to 6 are supported")
    for k, v in enumerate(deltas, start=1):
        if v.size != d**k:
            raise ValueError(f"delta({k}) must have length {d ** k}, got {v.size}")
    d1, d2, d3, d4, d5, d6 = deltas
    p = kron_power
    a = [np.ones(1), d1.copy()]
    a.append(d2 + p(d1, 2))
    a.append(d3 + 3 * kron(d2, d1) + p(d1, 3))
    a.append(d4 + 4 * kron(d3, d1) + 3 * p(d2, 2) + 6 * kron(d2, p(d1, 2)) + p(d1, 4))
    a.append(d5 + 5 * kron(d4, d1) + 10 * kron(d3, d2) + 10 * kron(d3, p(d1, 2))
             + 15 * kron(p(d2, 2), d1) + 10 * kron(d2, p(d1, 3)) + p(d1, 5))
    a.append(d6 + 6 * kron(d5, d1) + 15 * kron(d4, d2) + 15 * kron(d4, p(d1, 2))
             + 10 * p(d3, 2) + 60 * kron(kron(d3, d2), d1) + 20 * kron(d3, p(d1, 3))
             + 15 * p(d2, 3) + 45 * kron(p(d2, 2), p(d1, 2)) + 15 * kron(d2, p(d1, 4))
             + p(d1, 6))
    return a


def gca_density(x, cumulants, max_order: int = 4, higher: dict | None = None):
    """Truncated Gram-Charlier A approximation evaluated at ``x``.

    ``cumulants`` is a :class:`~exrot.stats.Cumulants1D` (``x`` scalar or
    array) or a :class:`~exrot.stats.CumulantVectors` (``x`` one d-vector).
    ``higher`` optionally supplies order-5 and order-6 cumulants as
    ``{5: k5, 6: k6}``.  The result can be negative.
    """
    from .stats import Cumulants1D, CumulantVectors

    if max_order not in (2, 3, 4, 5, 6):
        raise ValueError("max_order must be between 2 and 6")
    higher = higher or {}
    if isinstance(cumulants, Cumulants1D):
        c = cumulants
        z = (np.asarray(x, dtype=np.float64) - c.mean) / c.sigma
        k = {3: c.k3, 4: c.k4, 5: higher.get(5, 0.0), 6: higher.get(6, 0.0)}
        coef = {3: k[3] / 6, 4: k[4] / 24, 5: k[5] / 120, 6: (k[6] + 10 * k[3] ** 2) / 720}
        series = np.ones_like(z)
        for order in range(3, max_order + 1):
            series = series + coef[order] * c.sigma ** (-order) * np.asarray(hermite_1d(order, z))
        out = np.exp(-0.5 * z * z) / (c.sigma * _SQRT_2PI) * series
        return out if out.ndim else float(out)
    if isinstance(cumulants, CumulantVectors):
        cv = cumulants
        d = cv.d
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        cov = cv.m2.reshape(d, d, order="F")
        identity = np.allclose(cov, np.eye(d), rtol=0, atol=1e-12)
        deltas = [np.zeros(d), np.zeros(d * d), cv.c3, cv.c4,
                  np.asarray(higher.get(5, np.zeros(d**5)), dtype=np.float64),
                  np.asarray(higher.get(6, np.zeros(d**6)), dtype=np.float64)]
        alpha = alpha_coefficients(deltas)
        prec = None if identity else np.linalg.inv(cov)
        total, fact = 1.0, 1.0
        for order in range(1, max_order + 1):
            fact *= order
            if order < 3:
                continue
            h = hermite_vector(order, x, None if identity else cov)
            if prec is not None:
                h = _apply_each_axis(prec, h, order)
            total += float(alpha[order] @ h) / fact
        return gaussian_pdf_nd(x, None if identity else cov) * total
    raise TypeError("cumulants must be Cumulants1D or CumulantVectors")
