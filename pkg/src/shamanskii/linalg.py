"""Dense linear algebra kernels for small square systems.

Self-contained LU factorization with partial (row) pivoting plus the
triangular solves and the Euclidean norm the nonlinear iteration needs.
Everything operates on plain float64 numpy arrays; the systems stay small
(n up to a few dozen), so the code favours clarity over blocking tricks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EPS",
    "DimensionMismatch",
    "NonFiniteInput",
    "SingularMatrix",
    "LUFactors",
    "as_matrix",
    "as_vector",
    "lu_factor",
    "lu_solve",
    "norm2",
]

EPS = float(np.finfo(np.float64).eps)


class DimensionMismatch(ValueError):
    """Operands do not have compatible shapes."""


class NonFiniteInput(ValueError):
    """A matrix contains NaN or Inf where finite entries are required."""


class SingularMatrix(ArithmeticError):
    """Elimination hit a pivot below the singularity threshold."""


def as_vector(values) -> np.ndarray:
    """Coerce ``values`` to a fresh 1-D float64 array."""
    v = np.array(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a nonempty 1-D vector, got shape {v.shape}")
    return v


def as_matrix(values) -> np.ndarray:
    """Coerce ``values`` to a fresh square 2-D float64 array."""
    a = np.array(values, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {a.shape}")
    return a


def norm2(v) -> float:
    """Euclidean norm sqrt(sum(v_i**2)); NaN entries propagate to the result."""
    v = np.asarray(v, dtype=np.float64)
    return float(np.sqrt(np.dot(v, v)))


@dataclass(frozen=True)
class LUFactors:
    """Triangular factors of a row-permuted matrix: ``P A = L U``.

    ``lower`` is unit lower triangular with ``|L[i, j]| <= 1`` (partial
    pivoting), ``upper`` is upper triangular with every diagonal entry above
    the singularity threshold, and ``perm`` maps factored rows to original
    ones: row ``i`` of ``P A`` is row ``perm[i]`` of ``A``.
    """

    lower: np.ndarray
    upper: np.ndarray
    perm: np.ndarray
    n: int


def lu_factor(matrix) -> LUFactors:
    """Factor a square matrix as ``P A = L U`` with partial pivoting.

    Each elimination step picks the largest-magnitude entry of the current
    column as pivot.  A pivot smaller than ``n * eps * norm_inf(A)`` means the
    matrix is singular to working precision and raises :class:`SingularMatrix`
    instead of letting Inf/NaN leak into later computations.  The caller's
    matrix is never modified.
    """
    a = as_matrix(matrix)
    if not np.isfinite(a).all():
        raise NonFiniteInput("matrix contains NaN or Inf entries")
    n = a.shape[0]
    threshold = n * EPS * float(np.abs(a).sum(axis=1).max())
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = abs(a[p, k])
        if pivot < threshold or pivot == 0.0:
            raise SingularMatrix(
                f"pivot {pivot:.3e} below threshold {threshold:.3e} at column {k}"
            )
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        a[k + 1 :, k] /= a[k, k]
        a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :])
    lower = np.tril(a, -1) + np.eye(n)
    upper = np.triu(a)
    for arr in (lower, upper, perm):
        arr.setflags(write=False)
    return LUFactors(lower=lower, upper=upper, perm=perm, n=n)


def lu_solve(factors: LUFactors, b) -> np.ndarray:
    """Solve ``A x = b`` using precomputed factors of ``A``.

    Applies the row permutation to ``b``, then forward and back substitution.
    Reusing one factorization across many right-hand sides is the cheap part
    of the iteration: each call costs O(n^2) against O(n^3) for the
    factorization itself.
    """
    rhs = as_vector(b)
    n = factors.n
    if rhs.shape[0] != n:
        raise DimensionMismatch(f"right-hand side has length {rhs.shape[0]}, expected {n}")
    lower, upper = factors.lower, factors.upper
    y = np.empty(n)
    pb = rhs[factors.perm]
    for i in range(n):
        y[i] = pb[i] - lower[i, :i] @ y[:i]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - upper[i, i + 1 :] @ x[i + 1 :]) / upper[i, i]
    return x
