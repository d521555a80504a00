"""Deterministic dense linear-algebra kernels over real matrices.

Thin, reproducibility-minded wrappers around LAPACK (via numpy/scipy):
symmetric eigendecomposition, SVD, SPD inverse square root, linear
solves with an audited system size, condition numbers, and norms.

Determinism conventions
-----------------------
* Eigen/singular values are returned in descending order. Descending
  order is obtained by reversing LAPACK's ascending output, so ties keep
  the backend's stable order reversed.
* Each eigenvector / left singular vector is sign-normalized so that its
  largest-magnitude entry is positive, making outputs a pure function of
  the input bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .errors import (
    DimensionError,
    NumericInputError,
    SingularMatrixError,
    UndefinedConditionError,
)

__all__ = [
    "SymEig",
    "Svd",
    "InverseAudit",
    "sym_eig",
    "svd",
    "inv_sqrt_spd",
    "condition_number",
    "solve_spd",
    "nuclear_norm",
    "matrix_norm",
]

Matrix = NDArray[np.float64]


def _as_matrix(a, name: str = "matrix") -> Matrix:
    out = np.asarray(a, dtype=np.float64)
    if out.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got ndim={out.ndim}")
    if not np.all(np.isfinite(out)):
        raise NumericInputError(f"{name} contains non-finite entries")
    return out


def _as_square(a, name: str = "matrix") -> Matrix:
    out = _as_matrix(a, name)
    if out.shape[0] != out.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {out.shape}")
    return out


def _fix_signs(vectors: Matrix) -> Matrix:
    """Flip column signs so each column's largest-magnitude entry is positive."""
    if vectors.size == 0:
        return vectors
    lead = np.abs(vectors).argmax(axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


@dataclass
class SymEig:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: Matrix

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> Matrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


@dataclass
class Svd:
    """Singular value decomposition A = U @ diag(s) @ V.T, s descending.

    ``u`` is N x r and ``v`` is M x r with r = min(M, N), or M x M when
    built with ``full_matrices=True``.
    """

    u: Matrix
    s: NDArray[np.float64]
    v: Matrix

    def reconstruct(self) -> Matrix:
        return (self.u * self.s) @ self.v[:, : self.s.shape[0]].T


@dataclass
class InverseAudit:
    """Records the largest linear-system dimension seen during a construction.

    Filters use this to certify the size of the biggest inverse involved in
    building them.
    """

    max_dim: int = 0
    dims: list[int] = field(default_factory=list)

    def record(self, dim: int) -> None:
        self.dims.append(int(dim))
        if dim > self.max_dim:
            self.max_dim = int(dim)


def sym_eig(a) -> SymEig:
    """Eigendecomposition of the symmetric part of a square matrix.

    The input is symmetrized as (A + A') / 2 before decomposition, which
    absorbs the tiny asymmetry of accumulated empirical covariances.

    Returns eigenvalues in descending order with sign-normalized,
    orthonormal eigenvectors; the output is deterministic for identical
    input bits.
    """
    a = _as_square(a, "sym_eig input")
    sym = 0.5 * (a + a.T)
    vals, vecs = np.linalg.eigh(sym)
    # eigh returns ascending order; reverse rather than argsort so that
    # repeated eigenvalues come out in reversed backend order.
    vals = vals[::-1].copy()
    vecs = _fix_signs(vecs[:, ::-1])
    return SymEig(eigenvalues=vals, eigenvectors=vecs)


def svd(a, full_matrices: bool = False) -> Svd:
    """SVD with descending singular values and sign-normalized U columns.

    Right singular vectors paired with a kept left vector are flipped
    together; extra columns of a full V are normalized independently.
    """
    a = _as_matrix(a, "svd input")
    u, s, vt = np.linalg.svd(a, full_matrices=full_matrices)
    v = vt.T
    r = s.shape[0]
    if u.size:
        lead = np.abs(u).argmax(axis=0)
        signs = np.sign(u[lead, np.arange(u.shape[1])])
        signs[signs == 0] = 1.0
        u = u * signs
        v = v.copy()
        v[:, :r] = v[:, :r] * signs[:r]
        if v.shape[1] > r:
            v[:, r:] = _fix_signs(v[:, r:])
    return Svd(u=u, s=s, v=v)


def inv_sqrt_spd(a, floor: float | None = None,
                 audit: InverseAudit | None = None) -> Matrix:
    """Inverse square root of an SPD matrix via its eigendecomposition.

    Returns symmetric B with B @ A @ B = I. Eigenvalues at or below
    ``floor`` (default 1e-12 times the largest eigenvalue) raise
    :class:`SingularMatrixError` carrying the offending index and value;
    that error is itself a conditioning diagnostic.
    """
    eig = sym_eig(a)
    vals = eig.eigenvalues
    n = eig.dim
    lam_max = vals[0] if n else 0.0
    if floor is None:
        floor = 1e-12 * max(lam_max, 0.0)
    if n == 0:
        return np.zeros((0, 0))
    if vals[-1] <= floor:
        idx = int(n - 1)
        raise SingularMatrixError(
            f"matrix is numerically singular: eigenvalue[{idx}] = {vals[idx]:.6e}"
            f" <= floor {floor:.6e}",
            index=idx,
            value=float(vals[idx]),
        )
    v = eig.eigenvectors
    b = (v / np.sqrt(vals)) @ v.T
    if audit is not None:
        audit.record(n)
    return 0.5 * (b + b.T)


def condition_number(a) -> float:
    """Ratio of largest to smallest eigenvalue of a symmetric PSD matrix.

    Returns +inf when the smallest eigenvalue is nonpositive in floating
    point; an all-zero matrix has no condition number and raises.
    """
    a = _as_square(a, "condition_number input")
    if a.size == 0 or not np.any(a):
        raise UndefinedConditionError("condition number of the zero matrix is undefined")
    vals = np.linalg.eigvalsh(0.5 * (a + a.T))
    lam_min, lam_max = float(vals[0]), float(vals[-1])
    if lam_max <= 0.0:
        raise UndefinedConditionError("matrix has no positive eigenvalue")
    if lam_min <= 0.0:
        return float("inf")
    return lam_max / lam_min


def solve_spd(a, b, audit: InverseAudit | None = None) -> Matrix:
    """Solve A @ X = B for SPD A without forming an explicit inverse.

    Uses a Cholesky factorization; the dimension of A is recorded on
    ``audit`` so filter constructors can certify the size of their
    largest inverse. Inputs that violate the SPD assumption but are
    still invertible fall back to an LU solve (this best-effort path is
    what covariance-perturbation studies exercise); numerically singular
    systems raise :class:`SingularMatrixError`.
    """
    a = _as_square(a, "solve_spd lhs")
    b = np.asarray(b, dtype=np.float64)
    rhs = b if b.ndim == 2 else b.reshape(-1, 1)
    if rhs.shape[0] != a.shape[0]:
        raise DimensionError(
            f"rhs has {rhs.shape[0]} rows, expected {a.shape[0]}")
    if not np.all(np.isfinite(rhs)):
        raise NumericInputError("solve_spd rhs contains non-finite entries")
    try:
        factor = scipy.linalg.cho_factor(a, check_finite=False)
        x = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    except scipy.linalg.LinAlgError:
        try:
            x = np.linalg.solve(a, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(f"linear system is singular: {exc}") from exc
    if audit is not None:
        audit.record(a.shape[0])
    return x if b.ndim == 2 else x.ravel()


def nuclear_norm(a) -> float:
    """Sum of singular values."""
    a = _as_matrix(a, "nuclear_norm input")
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False).sum())


def matrix_norm(a, kind: str = "nuclear") -> float:
    """Submultiplicative matrix norm: ``"nuclear"`` or ``"frobenius"``."""
    if kind == "nuclear":
        return nuclear_norm(a)
    if kind == "frobenius":
        a = _as_matrix(a, "matrix_norm input")
        return float(np.linalg.norm(a))
    raise ValueError(f"unknown norm kind: {kind!r}")
