"""Linear MMSE filter constructors.

Builds every estimator supported by the library from a
:class:`~wclmmse.model.CovarianceModel`:

* ``wiener`` -- the unconstrained optimum ``c_xy @ inv(c_y)``.
* ``wiener_structured`` -- the optimum among filters sharing a prefilter.
* ``lrw`` / ``csw`` -- rank-truncated filters built on ``inv_sqrt(c_y)``.
* ``jpc`` / ``lsjpc`` -- truncations of the joint-covariance eigenbasis
  that never invert anything larger than L x L.
* ``jpc_simplified`` / ``lsjpc_simplified`` -- inverse-free approximations.
* ``weighted_filter`` -- any of the above under a weighted-trace objective.

No constructor ever forms an explicit M x M inverse; every ``inv(.) @``
in the defining formulas is realized as a linear solve whose dimension is
recorded, so each filter carries an audited ``max_inverse_dim``
certificate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionError, InvalidWeightError, ModelError, RankError, SingularMatrixError
from .linalg import InverseAudit, SymEig, Svd, inv_sqrt_spd, solve_spd, svd, sym_eig
from .model import CovarianceModel

__all__ = [
    "FilterKind",
    "LinearFilter",
    "Prefilter",
    "SpectralCache",
    "wiener",
    "wiener_structured",
    "lrw",
    "csw",
    "jpc",
    "lsjpc",
    "jpc_simplified",
    "lsjpc_simplified",
    "weighted_filter",
    "det_optimal_weight",
    "is_l_well_conditioned",
    "FILTER_CONSTRUCTORS",
]

_RANK_RTOL = 1e-10


class FilterKind(str, enum.Enum):
    WIENER = "wiener"
    WIENER_STRUCTURED = "wiener_structured"
    LRW = "lrw"
    CSW = "csw"
    JPC = "jpc"
    LSJPC = "lsjpc"
    JPC_SIMPLIFIED = "jpc_simplified"
    LSJPC_SIMPLIFIED = "lsjpc_simplified"
    WEIGHTED = "weighted"


@dataclass
class LinearFilter:
    """An N x M estimator matrix with its construction certificate.

    ``max_inverse_dim`` is the dimension of the largest linear system
    solved while building the filter; ``is_l_well_conditioned`` checks it
    against a truncation level.
    """

    matrix: NDArray[np.float64]
    kind: FilterKind
    l: int | None = None
    max_inverse_dim: int = 0
    base_kind: FilterKind | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def label(self) -> str:
        if self.kind is FilterKind.WEIGHTED and self.base_kind is not None:
            return f"weighted_{self.base_kind.value}"
        return self.kind.value

    def apply(self, y) -> NDArray[np.float64]:
        """Estimate x from input vectors y of shape (m,) or (k, m)."""
        y = np.asarray(y, dtype=np.float64)
        if y.ndim == 1:
            return self.matrix @ y
        return y @ self.matrix.T


@dataclass
class Prefilter:
    """A full-row-rank L x M matrix applied to the input before estimation."""

    matrix: NDArray[np.float64]

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2:
            raise DimensionError("prefilter must be a 2-D matrix")
        rows, cols = self.matrix.shape
        if rows > cols:
            raise DimensionError(
                f"prefilter has more rows ({rows}) than columns ({cols})")
        if not _has_full_column_rank(self.matrix.T):
            raise RankError(f"prefilter is rank-deficient (needs rank {rows})")

    @property
    def l(self) -> int:
        return self.matrix.shape[0]


def _has_full_column_rank(a: np.ndarray) -> bool:
    if a.shape[1] == 0:
        return True
    s = np.linalg.svd(a, compute_uv=False)
    return s.shape[0] >= a.shape[1] and s[-1] > _RANK_RTOL * s[0]


class SpectralCache:
    """Shared decompositions for one model: joint eigenbasis and whitened SVD.

    The joint eigenvectors are row-partitioned into the X part (top n
    rows) and the Y part (bottom m rows); truncations are views of the
    leading columns. The SVD of ``c_xy @ inv_sqrt(c_y)`` is computed
    lazily, only when a rank-truncated filter asks for it.
    """

    def __init__(self, model: CovarianceModel, eig_z: SymEig | None = None):
        self.model = model
        self.eig_z = eig_z if eig_z is not None else sym_eig(model.joint)
        if self.eig_z.dim != model.dim:
            raise DimensionError("eigendecomposition dimension does not match model")
        v = self.eig_z.eigenvectors
        self.basis_x = v[: model.n, :]
        self.basis_y = v[model.n :, :]
        gram_sum = self.basis_x.T @ self.basis_x + self.basis_y.T @ self.basis_y
        defect = np.linalg.norm(gram_sum - np.eye(model.dim))
        if defect > 1e-8:
            raise ModelError(f"joint eigenbasis is not orthonormal (defect {defect:.3e})")

    def _check_l(self, l: int) -> int:
        if not 1 <= l <= self.model.m:
            raise DimensionError(f"truncation level l={l} outside [1, {self.model.m}]")
        return int(l)

    def x_block(self, l: int) -> NDArray[np.float64]:
        """Top-n rows of the leading l joint eigenvectors."""
        return self.basis_x[:, : self._check_l(l)]

    def y_block(self, l: int) -> NDArray[np.float64]:
        """Bottom-m rows of the leading l joint eigenvectors."""
        return self.basis_y[:, : self._check_l(l)]

    def leading_eigenvalues(self, l: int) -> NDArray[np.float64]:
        return self.eig_z.eigenvalues[: self._check_l(l)]

    def gram_defect(self, l: int) -> float:
        """Frobenius distance of the Y-block Gram matrix from the identity."""
        y = self.y_block(l)
        return float(np.linalg.norm(y.T @ y - np.eye(l)))

    @cached_property
    def y_root_inv(self) -> NDArray[np.float64]:
        """Inverse square root of c_y; an M x M spectral inversion."""
        return inv_sqrt_spd(self.model.c_y)

    @cached_property
    def whitened_cross_svd(self) -> Svd:
        """SVD of c_xy @ inv_sqrt(c_y)."""
        return svd(self.model.c_xy @ self.y_root_inv)

    @cached_property
    def eig_y(self) -> SymEig:
        return sym_eig(self.model.c_y)


def _structured_matrix(c_xy, c_y, b, audit: InverseAudit) -> NDArray[np.float64]:
    """c_xy @ b' @ inv(b @ c_y @ b') @ b via an L x L solve."""
    bcb = b @ c_y @ b.T
    bcb = 0.5 * (bcb + bcb.T)
    w = solve_spd(bcb, b, audit=audit)
    return (c_xy @ b.T) @ w


def wiener(model: CovarianceModel) -> LinearFilter:
    """The unconstrained LMMSE filter c_xy @ inv(c_y), via an M x M solve."""
    audit = InverseAudit()
    try:
        matrix = solve_spd(model.c_y, model.c_xy.T, audit=audit).T
    except SingularMatrixError as exc:
        vals = np.linalg.eigvalsh(0.5 * (model.c_y + model.c_y.T))
        cond = float("inf") if vals[0] <= 0 else float(vals[-1] / vals[0])
        raise SingularMatrixError(
            f"input covariance is singular (condition number {cond:.3e}): {exc}",
            index=exc.index,
            value=exc.value,
        ) from exc
    return LinearFilter(matrix=matrix, kind=FilterKind.WIENER,
                        max_inverse_dim=audit.max_dim)


def wiener_structured(model: CovarianceModel, b: Prefilter | np.ndarray) -> LinearFilter:
    """The optimal filter among those factoring through prefilter ``b``.

    The result is invariant to premultiplication of ``b`` by any
    invertible matrix, and only an L x L system is solved.
    """
    if not isinstance(b, Prefilter):
        b = Prefilter(b)
    if b.matrix.shape[1] != model.m:
        raise DimensionError(
            f"prefilter has {b.matrix.shape[1]} columns, expected {model.m}")
    audit = InverseAudit()
    matrix = _structured_matrix(model.c_xy, model.c_y, b.matrix, audit)
    return LinearFilter(matrix=matrix, kind=FilterKind.WIENER_STRUCTURED,
                        l=b.l, max_inverse_dim=audit.max_dim)


def lrw(model: CovarianceModel, l: int, cache: SpectralCache | None = None) -> LinearFilter:
    """Rank-truncated filter from the SVD of the whitened cross-covariance.

    Keeps the first min(l, n) singular triplets; the inverse square root
    of c_y makes this an M-dimensional inversion regardless of l.
    """
    _check_truncation(model, l)
    audit = InverseAudit()
    if cache is not None:
        root_inv = cache.y_root_inv
        decomp = cache.whitened_cross_svd
        audit.record(model.m)
    else:
        root_inv = inv_sqrt_spd(model.c_y, audit=audit)
        decomp = svd(model.c_xy @ root_inv)
    keep = min(l, model.n, decomp.s.shape[0])
    u = decomp.u[:, :keep]
    s = decomp.s[:keep]
    v = decomp.v[:, :keep]
    matrix = (u * s) @ v.T @ root_inv
    return LinearFilter(matrix=matrix, kind=FilterKind.LRW, l=l,
                        max_inverse_dim=audit.max_dim)


def csw(model: CovarianceModel, l: int, cache: SpectralCache | None = None) -> LinearFilter:
    """Rank-truncated filter keeping input eigendirections by cross-spectral power.

    Components of the c_y eigenbasis are ranked by the score
    ``norm(c_xy @ q_i)^2 / lambda_i`` and the top l retained. Like the
    SVD-based truncation it relies on the full spectrum of c_y, so the
    recorded inverse size is M.
    """
    _check_truncation(model, l)
    eig = cache.eig_y if cache is not None else sym_eig(model.c_y)
    vals, q = eig.eigenvalues, eig.eigenvectors
    if vals[-1] <= 1e-12 * max(vals[0], 0.0):
        raise SingularMatrixError(
            f"input covariance is numerically singular: eigenvalue[{len(vals) - 1}]"
            f" = {vals[-1]:.6e}",
            index=len(vals) - 1,
            value=float(vals[-1]),
        )
    proj = model.c_xy @ q
    scores = np.einsum("ij,ij->j", proj, proj) / vals
    order = np.argsort(-scores, kind="stable")[: min(l, model.m)]
    q_kept = q[:, order]
    matrix = (proj[:, order] / vals[order]) @ q_kept.T
    audit = InverseAudit()
    audit.record(model.m)
    return LinearFilter(matrix=matrix, kind=FilterKind.CSW, l=l,
                        max_inverse_dim=audit.max_dim)


def jpc(model: CovarianceModel, l: int, cache: SpectralCache | None = None) -> LinearFilter:
    """Joint-principal-component filter: Wiener-structured with the Y rows
    of the leading joint eigenvectors as prefilter.

    Only an l x l system is solved, so the filter is computable without
    any inverse larger than l x l no matter how ill-conditioned c_y is.
    """
    cache = cache if cache is not None else SpectralCache(model)
    y = cache.y_block(l)
    if not _has_full_column_rank(y):
        raise RankError(
            f"Y rows of the leading {l} joint eigenvectors are rank-deficient"
            " (degenerate joint spectrum)")
    audit = InverseAudit()
    matrix = _structured_matrix(model.c_xy, model.c_y, y.T, audit)
    return LinearFilter(matrix=matrix, kind=FilterKind.JPC, l=l,
                        max_inverse_dim=audit.max_dim)


def lsjpc(model: CovarianceModel, l: int, cache: SpectralCache | None = None) -> LinearFilter:
    """Least-squares variant of the joint-principal-component filter.

    Resolves the input onto the range of the Y-block basis and maps the
    coordinates through the X block: ``x_block @ inv(y'y) @ y'``. Not
    Wiener-structured; also solves nothing larger than l x l.
    """
    cache = cache if cache is not None else SpectralCache(model)
    x = cache.x_block(l)
    y = cache.y_block(l)
    if not _has_full_column_rank(y):
        raise RankError(
            f"Y rows of the leading {l} joint eigenvectors are rank-deficient"
            " (degenerate joint spectrum)")
    gram = y.T @ y
    gram = 0.5 * (gram + gram.T)
    audit = InverseAudit()
    resolution = solve_spd(gram, y.T, audit=audit)
    matrix = x @ resolution
    return LinearFilter(matrix=matrix, kind=FilterKind.LSJPC, l=l,
                        max_inverse_dim=audit.max_dim)


def jpc_simplified(model: CovarianceModel, l: int,
                   cache: SpectralCache | None = None) -> LinearFilter:
    """Inverse-free JPC: replaces the l x l solve by reciprocal joint eigenvalues."""
    cache = cache if cache is not None else SpectralCache(model)
    y = cache.y_block(l)
    s = cache.leading_eigenvalues(l)
    if np.any(s <= 0.0):
        idx = int(np.argmax(s <= 0.0))
        raise SingularMatrixError(
            f"joint eigenvalue[{idx}] = {s[idx]:.6e} is not positive",
            index=idx,
            value=float(s[idx]),
        )
    matrix = (model.c_xy @ y / s) @ y.T
    return LinearFilter(matrix=matrix, kind=FilterKind.JPC_SIMPLIFIED, l=l,
                        max_inverse_dim=0)


def lsjpc_simplified(model: CovarianceModel, l: int,
                     cache: SpectralCache | None = None) -> LinearFilter:
    """Inverse-free LSJPC: treats the Y-block Gram matrix as the identity."""
    cache = cache if cache is not None else SpectralCache(model)
    matrix = cache.x_block(l) @ cache.y_block(l).T
    return LinearFilter(matrix=matrix, kind=FilterKind.LSJPC_SIMPLIFIED, l=l,
                        max_inverse_dim=0)


FILTER_CONSTRUCTORS = {
    FilterKind.WIENER: lambda model, l=None, cache=None: wiener(model),
    FilterKind.LRW: lrw,
    FilterKind.CSW: csw,
    FilterKind.JPC: jpc,
    FilterKind.LSJPC: lsjpc,
    FilterKind.JPC_SIMPLIFIED: jpc_simplified,
    FilterKind.LSJPC_SIMPLIFIED: lsjpc_simplified,
}


def weighted_filter(model: CovarianceModel, g, base: FilterKind,
                    l: int | None = None) -> LinearFilter:
    """Optimal filter for the weighted-trace objective tr(g'g @ C_err).

    Equivalent to building the base filter for the transformed targets
    ``g @ x`` and mapping back through ``inv(g)``. Weighting never
    changes the unconstrained optimum, so base ``wiener`` reproduces the
    plain Wiener filter.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.shape != (model.n, model.n):
        raise InvalidWeightError(
            f"weight must be {model.n} x {model.n}, got {g.shape}")
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] <= 1e-10 * s[0]:
        raise InvalidWeightError("weight matrix is numerically singular")
    if base not in FILTER_CONSTRUCTORS:
        raise ValueError(f"unsupported base filter kind: {base}")
    c_x_t = g @ model.c_x @ g.T
    transformed = CovarianceModel(
        n=model.n,
        m=model.m,
        c_x=0.5 * (c_x_t + c_x_t.T),
        c_y=model.c_y,
        c_xy=g @ model.c_xy,
    )
    inner = FILTER_CONSTRUCTORS[base](transformed, l)
    matrix = np.linalg.solve(g, inner.matrix)
    return LinearFilter(
        matrix=matrix,
        kind=FilterKind.WEIGHTED,
        l=inner.l,
        max_inverse_dim=max(inner.max_inverse_dim, model.n),
        base_kind=base,
    )


def det_optimal_weight(model: CovarianceModel) -> NDArray[np.float64]:
    """The weight that makes the weighted-trace optimum minimize the
    determinant of the error covariance: inv_sqrt(c_x)."""
    return inv_sqrt_spd(model.c_x)


def is_l_well_conditioned(filt: LinearFilter, l: int) -> bool:
    """True when the filter was built without any inverse larger than l x l."""
    return filt.max_inverse_dim <= l


def _check_truncation(model: CovarianceModel, l: int) -> None:
    if not 1 <= l <= model.m:
        raise DimensionError(f"truncation level l={l} outside [1, {model.m}]")
