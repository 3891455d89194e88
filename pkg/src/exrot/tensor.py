"""Kronecker-product linear algebra used by the multivariate formulas.

Vectors are 1-D ``float64`` arrays and matrices are 2-D arrays.  The
``vec`` convention is column-major throughout.  A Kronecker vector
``a1 ⊗ a2 ⊗ ... ⊗ an`` is indexed with the first factor most significant,
so ``v.reshape(dims)`` (C order) recovers the tensor ``T[i1, ..., in]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np


def _as_array(a) -> np.ndarray:
    return np.asarray(a, dtype=np.float64)


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``.

    Works for vectors and matrices alike (vectors stay 1-D).
    """
    return np.kron(_as_array(a), _as_array(b))


def kron_power(v, n: int) -> np.ndarray:
    """``v ⊗ v ⊗ ... ⊗ v`` with ``n`` copies; ``n = 0`` gives the scalar 1."""
    if n < 0:
        raise ValueError(f"kron_power needs n >= 0, got {n}")
    v = _as_array(v)
    if n == 0:
        return np.ones(1) if v.ndim <= 1 else np.ones((1, 1))
    return reduce(np.kron, [v] * n)


def vec(m) -> np.ndarray:
    """Stack the columns of ``m`` into one vector."""
    m = _as_array(m)
    if m.ndim == 1:
        return m.copy()
    return m.reshape(-1, order="F")


def devec(v, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec` for a ``rows x cols`` matrix."""
    v = _as_array(v).ravel()
    if v.size != rows * cols:
        raise ValueError(f"cannot devec length {v.size} into {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def hadamard(a, b) -> np.ndarray:
    a, b = _as_array(a), _as_array(b)
    if a.shape != b.shape:
        raise ValueError(f"hadamard shape mismatch: {a.shape} vs {b.shape}")
    return a * b


def delta2(d: int) -> np.ndarray:
    """``vec(I_d)``: ones at the d diagonal positions of a d² vector."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return vec(np.eye(d))


@dataclass(frozen=True)
class IndexPermutation:
    """Reordering of the factors of a Kronecker product.

    ``dims[i]`` is the length of input factor ``i`` and ``mapping[i]`` the
    output position that factor moves to (both 0-based).
    """

    dims: tuple[int, ...]
    mapping: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        mapping = tuple(int(x) for x in self.mapping)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mapping", mapping)
        if len(dims) != len(mapping):
            raise ValueError("dims and mapping must have the same arity")
        if any(x < 1 for x in dims):
            raise ValueError("factor dimensions must be >= 1")
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"mapping {mapping} is not a bijection")

    @property
    def arity(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    def inverse(self) -> "IndexPermutation":
        inv = [0] * self.arity
        for src, dst in enumerate(self.mapping):
            inv[dst] = src
        out_dims = tuple(self.dims[inv[k]] for k in range(self.arity))
        return IndexPermutation(out_dims, tuple(inv))

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "IndexPermutation":
        return cls(tuple(dims), tuple(range(len(dims))))

    @classmethod
    def swap(cls, dims: Sequence[int], i: int, j: int) -> "IndexPermutation":
        """Exchange factors ``i`` and ``j``."""
        mapping = list(range(len(dims)))
        mapping[i], mapping[j] = j, i
        return cls(tuple(dims), tuple(mapping))

    @classmethod
    def from_order(cls, dims: Sequence[int], order: Sequence[int]) -> "IndexPermutation":
        """Permutation whose output is ``a[order[0]] ⊗ a[order[1]] ⊗ ...``."""
        mapping = [0] * len(order)
        for pos, src in enumerate(order):
            mapping[src] = pos
        return cls(tuple(dims), tuple(mapping))


def commutation_apply(p: IndexPermutation, v) -> np.ndarray:
    """Apply the commutation matrix of ``p`` to ``v`` without materializing it.

    For rank-1 input ``a1 ⊗ ... ⊗ an`` factor ``i`` lands at position
    ``p.mapping[i]``; other inputs follow by linearity.
    """
    v = _as_array(v).ravel()
    if v.size != p.size:
        raise ValueError(f"vector length {v.size} does not match dims {p.dims}")
    inv = p.inverse().mapping
    return np.transpose(v.reshape(p.dims), inv).ravel()


def commutation_matrix(p: IndexPermutation) -> np.ndarray:
    """Dense matrix form of ``p``; only meant for small tests."""
    eye = np.eye(p.size)
    return np.column_stack([commutation_apply(p, e) for e in eye])


def symmetrize(v, d: int, order: int) -> np.ndarray:
    """Average a ``d**order`` Kronecker vector over all factor permutations."""
    from itertools import permutations

    t = _as_array(v).reshape((d,) * order)
    perms = list(permutations(range(order)))
    acc = np.zeros_like(t)
    for perm in perms:
        acc += np.transpose(t, perm)
    return (acc / len(perms)).ravel()
