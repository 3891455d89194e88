"""Sample moments, cumulants and whitening.

All estimators are plug-in (biased) central-moment estimators.  Moment
accumulation runs over fixed-size row chunks so the summation order, and
therefore the result, does not depend on anything but the data.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import IndexPermutation, commutation_apply, kron, symmetrize, vec

_CHUNK = 1 << 15
_WHITE_TOL = 1e-2


@dataclass(frozen=True)
class Cumulants1D:
    n: int
    mean: float
    sigma: float
    k3: float
    k4: float

    def __post_init__(self):
        vals = (self.mean, self.sigma, self.k3, self.k4)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("cumulants must be finite")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class CumulantVectors:
    """Stacked second moment and third/fourth cumulants of whitened data."""

    d: int
    m2: np.ndarray
    c3: np.ndarray
    c4: np.ndarray
    n: int = 0

    def __post_init__(self):
        d = int(self.d)
        for name, order in (("m2", 2), ("c3", 3), ("c4", 4)):
            v = np.asarray(getattr(self, name), dtype=np.float64).ravel()
            if v.size != d**order:
                raise ValueError(f"{name} must have length {d ** order}, got {v.size}")
            object.__setattr__(self, name, v)

    @classmethod
    def gaussian(cls, d: int) -> "CumulantVectors":
        """Cumulants of N(0, I_d): identity second moment, zero c3 and c4."""
        return cls(d, vec(np.eye(d)), np.zeros(d**3), np.zeros(d**4))


@dataclass(frozen=True)
class WhitenTransform:
    """Affine map ``y = W (x - center)``."""

    center: np.ndarray
    forward: np.ndarray
    inverse: np.ndarray

    def apply(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.center) @ self.forward.T

    def invert(self, y) -> np.ndarray:
        return np.asarray(y, dtype=np.float64) @ self.inverse.T + self.center

    @property
    def abs_det(self) -> float:
        """``|det W|``, the density Jacobian from x-space to white space."""
        return float(abs(np.linalg.det(self.forward)))


def _as_2d(data) -> np.ndarray:
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("data must be a non-empty (n,) or (n, d) array")
    if not np.all(np.isfinite(x)):
        raise ValueError("data contains non-finite values")
    return x


def moment_vector(data, k: int, centered: bool = False) -> np.ndarray:
    """Sample mean of ``x^{⊗k}`` (length ``d**k``), optionally after centering."""
    x = _as_2d(data)
    n, d = x.shape
    if not 0 <= k <= 4:
        raise ValueError("moment order must be between 0 and 4")
    if n < max(k, 1):
        raise ValueError(f"need at least {k} samples for order {k}")
    if centered:
        x = x - x.mean(axis=0)
    total = np.zeros(d**k)
    for start in range(0, n, _CHUNK):
        block = x[start:start + _CHUNK]
        prod = np.ones((block.shape[0], 1))
        for _ in range(k):
            prod = (prod[:, :, None] * block[:, None, :]).reshape(block.shape[0], -1)
        total += prod.sum(axis=0)
    return total / n


def cumulants_1d(data) -> Cumulants1D:
    """Mean, standard deviation, third and fourth cumulant of 1-D data."""
    x = np.asarray(data, dtype=np.float64).ravel()
    if x.size < 4:
        raise ValueError("need at least 4 samples")
    m2 = float(moment_vector(x, 2, centered=True)[0])
    if not m2 > 0:
        raise ValueError("data has zero variance")
    m3 = float(moment_vector(x, 3, centered=True)[0])
    m4 = float(moment_vector(x, 4, centered=True)[0])
    return Cumulants1D(x.size, float(x.mean()), float(np.sqrt(m2)), m3, m4 - 3.0 * m2 * m2)


# output slots for the three ways to pair four factors, applied to m2 ⊗ m2
_PAIRINGS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))


def cumulant_vectors(data, check_white: bool = True) -> CumulantVectors:
    """Third and fourth cumulant vectors of centered, whitened data.

    ``c4 = m4 - sum over pairings of K(m2 ⊗ m2)``, then both vectors are
    averaged over all factor permutations.  The pairings use the sample's own
    second moment, so for ``d = 1`` the result equals :func:`cumulants_1d`.
    """
    x = _as_2d(data)
    n, d = x.shape
    if n < 4:
        raise ValueError("need at least 4 samples")
    m2 = moment_vector(x, 2, centered=True)
    if check_white:
        cov = m2.reshape(d, d)
        dev = np.max(np.abs(cov - np.eye(d)))
        mean_dev = np.max(np.abs(x.mean(axis=0)))
        if dev > _WHITE_TOL or mean_dev > _WHITE_TOL:
            raise ValueError(
                f"data is not whitened (covariance deviates from I by {dev:.3g}, "
                f"mean by {mean_dev:.3g}); call whiten() first")
    c3 = moment_vector(x, 3, centered=True)
    m4 = moment_vector(x, 4, centered=True)
    mm = kron(m2, m2)
    pairs = [commutation_apply(IndexPermutation((d,) * 4, p), mm) for p in _PAIRINGS]
    c4 = m4 - (pairs[0] + pairs[1] + pairs[2])
    if d > 1:
        c3 = symmetrize(c3, d, 3)
        c4 = symmetrize(c4, d, 4)
    return CumulantVectors(d, m2, c3, c4, n)


def whiten(data) -> tuple[np.ndarray, WhitenTransform]:
    """Symmetric (ZCA) whitening with the biased sample covariance."""
    x = _as_2d(data)
    n, d = x.shape
    if n < d + 1:
        raise ValueError("need more samples than dimensions to whiten")
    center = x.mean(axis=0)
    xc = x - center
    cov = xc.T @ xc / n
    evals, evecs = np.linalg.eigh(cov)
    if evals[0] <= 1e-12 * max(evals[-1], 1e-300):
        raise ValueError("sample covariance is singular")
    fwd = (evecs / np.sqrt(evals)) @ evecs.T
    inv = (evecs * np.sqrt(evals)) @ evecs.T
    t = WhitenTransform(center, fwd, inv)
    return xc @ fwd.T, t
