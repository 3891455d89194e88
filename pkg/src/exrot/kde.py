"""Gaussian-kernel density and density-derivative estimation by direct summation."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .hermite import hermite_1d
from .stats import WhitenTransform, whiten

DEFAULT_GRID_POINTS = 4096
# kernel terms beyond this many bandwidths are below 1e-13 of the peak
_WINDOW = 8.0
_CHUNK = 256
_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class DensityEstimate:
    grid: np.ndarray
    values: np.ndarray
    h: float | np.ndarray
    n: int

    def to_csv(self, path) -> None:
        """Write ``point,value`` rows (one coordinate column per axis for d > 1)."""
        write_estimate_csv(self, path)


def default_grid(samples, h: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """``points`` equispaced values over ``[min - 5h, max + 5h]``."""
    x = np.asarray(samples, dtype=np.float64)
    return np.linspace(x.min() - 5 * h, x.max() + 5 * h, points)


def _check_samples(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("need at least one sample")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples contain non-finite values")
    return x


def _kernel_sum(xs: np.ndarray, h: float, grid: np.ndarray, r: int) -> np.ndarray:
    # xs sorted; each grid chunk only sees samples within the kernel window
    out = np.empty(grid.size)
    sign = -1.0 if r % 2 else 1.0
    scale = sign / (xs.size * h ** (r + 1) * _SQRT_2PI)
    for start in range(0, grid.size, _CHUNK):
        g = grid[start:start + _CHUNK]
        lo = np.searchsorted(xs, g.min() - _WINDOW * h, side="left")
        hi = np.searchsorted(xs, g.max() + _WINDOW * h, side="right")
        u = (g[:, None] - xs[None, lo:hi]) / h
        k = np.exp(-0.5 * u * u)
        if r:
            k *= hermite_1d(r, u)
        out[start:start + _CHUNK] = k.sum(axis=1) * scale
    return out


def kde_derivative_1d(samples, h: float, r: int, grid=None) -> DensityEstimate:
    """``r``-th derivative estimate ``(1/N) Σ K_h^{(r)}(x - x_i)`` for r in {0, 1, 2}."""
    if r not in (0, 1, 2):
        raise ValueError("derivative order must be 0, 1 or 2")
    if not h > 0:
        raise ValueError("bandwidth must be positive")
    x = np.sort(_check_samples(samples))
    grid = default_grid(x, h) if grid is None else np.atleast_1d(np.asarray(grid, dtype=np.float64))
    return DensityEstimate(grid, _kernel_sum(x, float(h), grid, r), float(h), x.size)


def kde_1d(samples, h: float, grid=None) -> DensityEstimate:
    """Gaussian KDE ``(1/(N h)) Σ φ((x - x_i) / h)`` on ``grid``."""
    return kde_derivative_1d(samples, h, 0, grid)


def grid_nd(lo, hi, points: int = 128) -> np.ndarray:
    """Lexicographic tensor grid, ``points`` per axis, as an ``(points**d, d)`` array."""
    lo, hi = np.atleast_1d(lo).astype(float), np.atleast_1d(hi).astype(float)
    axes = [np.linspace(a, b, points) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def kde_nd(samples, h, points) -> DensityEstimate:
    """Product-kernel estimate with per-axis bandwidths ``h`` (a scalar means ``h·1``)."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    n, d = x.shape
    if n == 0:
        raise ValueError("need at least one sample")
    h = np.broadcast_to(np.asarray(h, dtype=np.float64), (d,)).copy()
    if np.any(~(h > 0)):
        raise ValueError("all bandwidths must be positive")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, d)
    norm = 1.0 / (n * np.prod(h) * _SQRT_2PI**d)
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], _CHUNK):
        p = pts[start:start + _CHUNK]
        q = np.zeros((p.shape[0], n))
        for j in range(d):
            u = (p[:, j, None] - x[None, :, j]) / h[j]
            q += u * u
        out[start:start + _CHUNK] = np.exp(-0.5 * q).sum(axis=1) * norm
    return DensityEstimate(pts, out, h, n)


def kde_whitened(samples, h: float, points, transform: WhitenTransform | None = None
                 ) -> DensityEstimate:
    """Estimate with ``H = h I`` in whitened coordinates, mapped back to x-space.

    The density picks up the Jacobian ``|det W|`` of the whitening map.
    """
    x = np.asarray(samples, dtype=np.float64)
    if transform is None:
        white, transform = whiten(x)
    else:
        white = transform.apply(x)
    pts = np.asarray(points, dtype=np.float64).reshape(-1, white.shape[1])
    est = kde_nd(white, h, transform.apply(pts))
    return DensityEstimate(pts, est.values * transform.abs_det, est.h, est.n)


def write_estimate_csv(est: DensityEstimate, target) -> None:
    """Write the estimate to a path or an open text stream."""
    if hasattr(target, "write"):
        _write_rows(est, target)
        return
    with Path(target).open("w", newline="") as fh:
        _write_rows(est, fh)


def _write_rows(est: DensityEstimate, fh) -> None:
    grid = np.asarray(est.grid)
    cols = ["point"] if grid.ndim == 1 else [f"x{j + 1}" for j in range(grid.shape[1])]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols + ["value"])
    for p, v in zip(grid, est.values):
        coords = [p] if grid.ndim == 1 else list(p)
        w.writerow([repr(float(c)) for c in coords] + [repr(float(v))])
