"""Analytic error metrics and convergence diagnostics.

Covers the closed-form mean square error and its weighted-trace /
determinant generalizations, the truncation-power loss of a spectrum,
convergence-vs-loss scaling studies against the unconstrained filter,
and a grid line search for the truncation level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionError, WclmmseError
from .filters import (
    FILTER_CONSTRUCTORS,
    FilterKind,
    LinearFilter,
    SpectralCache,
    wiener,
)
from .linalg import Svd, matrix_norm, sym_eig
from .model import CovarianceModel

__all__ = [
    "ScalingStudy",
    "analytic_mse",
    "weighted_trace_objective",
    "det_objective",
    "error_covariance",
    "truncation_power_loss",
    "scaling_study",
    "best_l_search",
]

# Distances below this relative floor mean the filter has already
# converged to the reference; the loss ratio is reported as 0 there.
_CONVERGED_RTOL = 1e-10


def _matrix_of(filt) -> NDArray[np.float64]:
    a = filt.matrix if isinstance(filt, LinearFilter) else np.asarray(filt, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError("filter must be a matrix")
    return a


def _check_shape(model: CovarianceModel, a: np.ndarray) -> None:
    if a.shape != (model.n, model.m):
        raise DimensionError(
            f"filter has shape {a.shape}, expected {(model.n, model.m)}")


def analytic_mse(model: CovarianceModel, filt) -> float:
    """Mean square error tr(c_x) - 2 tr(c_xy A') + tr(A c_y A')."""
    a = _matrix_of(filt)
    _check_shape(model, a)
    cross = float(np.einsum("ij,ij->", model.c_xy, a))
    quad = float(np.einsum("ij,ij->", a @ model.c_y, a))
    return float(np.trace(model.c_x)) - 2.0 * cross + quad


def error_covariance(model: CovarianceModel, filt) -> NDArray[np.float64]:
    """Covariance of the estimation error A y - x."""
    a = _matrix_of(filt)
    _check_shape(model, a)
    ac = a @ model.c_xy.T
    c_err = model.c_x - ac - ac.T + a @ model.c_y @ a.T
    return 0.5 * (c_err + c_err.T)


def weighted_trace_objective(model: CovarianceModel, filt, g) -> float:
    """tr(g'g @ C_err): the mean square error of the g-weighted residual."""
    g = np.asarray(g, dtype=np.float64)
    if g.shape[1] != model.n:
        raise DimensionError(f"weight has {g.shape[1]} columns, expected {model.n}")
    c_err = error_covariance(model, filt)
    return float(np.einsum("ij,ij->", g.T @ g, c_err))


def det_objective(model: CovarianceModel, filt) -> float:
    """Determinant of the error covariance, via its eigenvalue product.

    The error covariance is PSD for any filter; eigenvalues below
    -1e-10 relative indicate a numerical problem and raise.
    """
    c_err = error_covariance(model, filt)
    vals = np.linalg.eigvalsh(c_err)
    lam_max = max(float(vals[-1]), 0.0)
    if vals.size and float(vals[0]) < -1e-10 * max(lam_max, 1.0):
        raise WclmmseError(
            f"error covariance is not PSD: smallest eigenvalue {vals[0]:.3e}")
    return float(np.prod(np.clip(vals, 0.0, None)))


def truncation_power_loss(source, l: int, flavor: str = "jpc") -> float:
    """Spectrum mass discarded by keeping the leading l components.

    ``flavor="lrw"`` reads singular values (of the whitened
    cross-covariance), ``flavor="jpc"`` reads joint-covariance
    eigenvalues. ``source`` may be a :class:`SpectralCache`, an
    :class:`~wclmmse.linalg.Svd`, or a plain 1-D spectrum.
    """
    spectrum = _spectrum_of(source, flavor)
    if not 1 <= l <= spectrum.shape[0]:
        raise DimensionError(
            f"truncation level l={l} outside [1, {spectrum.shape[0]}]")
    return float(spectrum[l:].sum())


def _spectrum_of(source, flavor: str) -> NDArray[np.float64]:
    if flavor not in ("lrw", "jpc"):
        raise ValueError(f"unknown truncation flavor: {flavor!r}")
    if isinstance(source, SpectralCache):
        if flavor == "lrw":
            return source.whitened_cross_svd.s
        return source.eig_z.eigenvalues
    if isinstance(source, Svd):
        return source.s
    spectrum = np.asarray(source, dtype=np.float64)
    if spectrum.ndim != 1:
        raise DimensionError("spectrum source must be 1-D")
    return spectrum


@dataclass
class ScalingStudy:
    """Convergence-to-unconstrained data over a truncation grid.

    One row per level l: the truncation-power loss, the distance of the
    truncated filter from the unconstrained one in the chosen norm, the
    mean-square-error gap, and the Y-block Gram defect. ``slope`` is the
    through-origin fit of distance against loss; ``max_ratio`` the
    largest distance/loss ratio on the grid (0 where the loss is zero
    and the filter has converged).
    """

    kind: FilterKind
    norm: str
    l: NDArray[np.intp]
    rho_l: NDArray[np.float64]
    dist: NDArray[np.float64]
    mse_gap: NDArray[np.float64]
    gram_defect: NDArray[np.float64]
    slope: float = field(default=0.0)
    max_ratio: float = field(default=0.0)

    def __post_init__(self) -> None:
        if not np.all(np.diff(self.l) > 0):
            raise DimensionError("grid levels must be strictly increasing")
        if np.any(np.diff(self.rho_l) > 1e-12 * max(self.rho_l.max(initial=0.0), 1.0)):
            raise WclmmseError("truncation-power loss must be non-increasing in l")

    def ratios(self, converged_floor: float) -> NDArray[np.float64]:
        """dist / rho_l with the zero-loss convention described above."""
        out = np.empty_like(self.dist)
        for i, (d, r) in enumerate(zip(self.dist, self.rho_l)):
            if r > 0.0:
                out[i] = d / r
            else:
                out[i] = 0.0 if d <= converged_floor else np.inf
        return out


def scaling_study(model: CovarianceModel, filter_kind: FilterKind,
                  l_grid, norm: str = "nuclear") -> ScalingStudy:
    """Measure how fast a truncated filter approaches the unconstrained one.

    For each level on the grid, records the truncation-power loss of the
    relevant spectrum (singular values for the rank-truncated family,
    joint eigenvalues otherwise), the filter's distance to the
    unconstrained filter, the MSE gap, and the Gram defect of the
    Y-block basis. For the rank-truncated family the loss uses the
    effective truncation min(l, n), mirroring what the filter discards.
    """
    filter_kind = FilterKind(filter_kind)
    if filter_kind not in FILTER_CONSTRUCTORS or filter_kind is FilterKind.WIENER:
        raise ValueError(f"scaling study undefined for kind {filter_kind}")
    grid = np.asarray(list(l_grid), dtype=np.intp)
    if grid.size == 0:
        raise DimensionError("empty truncation grid")
    reference = wiener(model)
    ref_mse = analytic_mse(model, reference)
    ref_norm = matrix_norm(reference.matrix, norm)
    cache = SpectralCache(model)
    constructor = FILTER_CONSTRUCTORS[filter_kind]

    rho = np.empty(grid.size)
    dist = np.empty(grid.size)
    gap = np.empty(grid.size)
    gram = np.empty(grid.size)
    lrw_family = filter_kind in (FilterKind.LRW, FilterKind.CSW)
    for i, l in enumerate(grid):
        filt = constructor(model, int(l), cache=cache)
        if lrw_family:
            spectrum = cache.whitened_cross_svd.s
            effective = min(int(l), model.n, spectrum.shape[0])
            rho[i] = truncation_power_loss(spectrum, effective, "lrw")
        else:
            rho[i] = truncation_power_loss(cache, int(l), "jpc")
        dist[i] = matrix_norm(filt.matrix - reference.matrix, norm)
        gap[i] = analytic_mse(model, filt) - ref_mse
        gram[i] = cache.gram_defect(int(l))

    study = ScalingStudy(kind=filter_kind, norm=norm, l=grid, rho_l=rho,
                         dist=dist, mse_gap=gap, gram_defect=gram)
    denom = float(np.dot(rho, rho))
    study.slope = float(np.dot(rho, dist) / denom) if denom > 0.0 else 0.0
    floor = _CONVERGED_RTOL * max(ref_norm, 1.0)
    ratios = study.ratios(converged_floor=floor)
    study.max_ratio = float(ratios.max()) if ratios.size else 0.0
    return study


def best_l_search(model: CovarianceModel, filter_kind: FilterKind,
                  l_min: int, l_max: int, step: int = 1) -> tuple[int, float]:
    """Grid line search for the truncation level with smallest analytic MSE.

    Evaluates the closed-form MSE on the (training) covariances; ties go
    to the smaller level, which is cheaper and better conditioned.
    """
    filter_kind = FilterKind(filter_kind)
    if step < 1:
        raise DimensionError(f"step must be >= 1, got {step}")
    grid = list(range(l_min, l_max + 1, step))
    if not grid:
        raise DimensionError(f"empty grid: l_min={l_min}, l_max={l_max}")
    constructor = FILTER_CONSTRUCTORS[filter_kind]
    cache = SpectralCache(model)
    best_l, best_mse = grid[0], np.inf
    for l in grid:
        mse = analytic_mse(model, constructor(model, l, cache=cache))
        if mse < best_mse:
            best_l, best_mse = l, mse
    return best_l, float(best_mse)
