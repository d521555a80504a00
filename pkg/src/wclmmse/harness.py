"""Experiment orchestration: truncation sweeps, window-length sweeps,
condition-number reports, and scaling reports.

Rows are plot-ready records in the fixed result schema. A construction
failure (e.g. a singular input covariance) is captured in its row as NaN
metrics instead of aborting the sweep: failure regimes are part of what
these experiments measure. Rows are sorted by (filter, m, l) before
serialization so ordering never depends on execution order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import dataio
from .diagnostics import analytic_mse, best_l_search, scaling_study, truncation_power_loss
from .errors import WclmmseError
from .filters import FILTER_CONSTRUCTORS, FilterKind, SpectralCache
from .linalg import condition_number
from .model import CovarianceModel, estimate_covariance, sample_from_model

__all__ = [
    "ExperimentResult",
    "LPolicy",
    "parse_l_policy",
    "run_l_sweep",
    "run_m_sweep",
    "run_condition_report",
    "run_scaling_report",
]

_DEFAULT_TEST_DRAWS = 1000

# Largest system a construction may nominally touch, used to label rows
# whose construction failed before an audit was produced.
_NOMINAL_INVERSE = {
    FilterKind.WIENER: lambda m, l: m,
    FilterKind.LRW: lambda m, l: m,
    FilterKind.CSW: lambda m, l: m,
    FilterKind.JPC: lambda m, l: l,
    FilterKind.LSJPC: lambda m, l: l,
    FilterKind.JPC_SIMPLIFIED: lambda m, l: 0,
    FilterKind.LSJPC_SIMPLIFIED: lambda m, l: 0,
}


@dataclass
class ExperimentResult:
    """One (filter, m, l) record of a sweep."""

    filter: str
    m: int
    n: int
    l: int | None
    norm_rms: float
    analytic_mse: float
    rho_l: float
    cond_cy: float
    max_inverse_dim: int
    wall_ms: float

    def as_dict(self) -> dict:
        return {
            "filter": self.filter,
            "m": self.m,
            "n": self.n,
            "l": self.l,
            "norm_rms": self.norm_rms,
            "analytic_mse": self.analytic_mse,
            "rho_l": self.rho_l,
            "cond_cy": self.cond_cy,
            "max_inverse_dim": self.max_inverse_dim,
            "wall_ms": self.wall_ms,
        }


@dataclass
class LPolicy:
    """Truncation-level policy for window-length sweeps.

    ``fixed`` uses the given level everywhere; ``best`` runs the
    analytic-MSE line search on the training covariances, over a grid
    derived from each window length unless bounds are given.
    """

    mode: str = "best"
    l: int | None = None
    l_min: int | None = None
    l_max: int | None = None
    step: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("fixed", "best"):
            raise ValueError(f"unknown policy mode: {self.mode!r}")
        if self.mode == "fixed" and (self.l is None or self.l < 1):
            raise ValueError("fixed policy needs a positive level")

    def level_for(self, model: CovarianceModel, kind: FilterKind) -> int:
        if self.mode == "fixed":
            return min(self.l, model.m)
        m = model.m
        l_min = self.l_min if self.l_min is not None else max(1, model.n)
        l_max = self.l_max if self.l_max is not None else m
        step = self.step if self.step is not None else max(1, m // 16)
        best, _ = best_l_search(model, kind, min(l_min, m), min(l_max, m), step)
        return best


def parse_l_policy(text: str) -> LPolicy:
    """Parse ``best`` or ``fixed:L``."""
    if text == "best":
        return LPolicy(mode="best")
    if text.startswith("fixed:"):
        return LPolicy(mode="fixed", l=int(text.split(":", 1)[1]))
    raise ValueError(f"cannot parse l-policy {text!r} (use 'best' or 'fixed:L')")


def _parse_kinds(filters) -> list[FilterKind]:
    kinds = []
    for item in filters:
        kind = FilterKind(item) if not isinstance(item, FilterKind) else item
        if kind not in FILTER_CONSTRUCTORS:
            raise ValueError(f"filter kind {kind} cannot be swept")
        kinds.append(kind)
    return kinds


def _prepare(source, m: int, n: int, seed: int, test_draws: int):
    """Turn a series or model into (model, test vectors, mean)."""
    if isinstance(source, CovarianceModel):
        if source.m != m or source.n != n:
            raise ValueError(
                f"model has (n, m) = {(source.n, source.m)}, requested {(n, m)}")
        test = sample_from_model(source, test_draws, seed=seed + 1)
        return source, test.samples, 0.0
    cfg = dataio.SeriesConfig(m=m, n=n, seed=seed)
    samples = dataio.window_samples(source, cfg)
    model = estimate_covariance(samples.train_samples(), n)
    return model, samples.test_samples(), samples.mean


def _sort_key(row: ExperimentResult):
    return (row.filter, row.m, -1 if row.l is None else row.l)


def _sweep_cell(kind: FilterKind, model: CovarianceModel, l: int | None,
                test_z: np.ndarray, mean: float, rho_cache: SpectralCache,
                cond_cy: float) -> ExperimentResult:
    """Build one filter (timing its construction and application) and score it."""
    constructor = FILTER_CONSTRUCTORS[kind]
    m, n = model.m, model.n
    started = time.perf_counter()
    try:
        filt = constructor(model, l) if l is not None else constructor(model)
        predictions = filt.apply(test_z[:, n:])
        wall_ms = (time.perf_counter() - started) * 1e3
    except WclmmseError:
        wall_ms = (time.perf_counter() - started) * 1e3
        return ExperimentResult(
            filter=kind.value, m=m, n=n, l=l,
            norm_rms=float("nan"), analytic_mse=float("nan"),
            rho_l=_rho_for(kind, rho_cache, l, n),
            cond_cy=cond_cy,
            max_inverse_dim=_NOMINAL_INVERSE[kind](m, l),
            wall_ms=wall_ms,
        )
    del predictions
    return ExperimentResult(
        filter=kind.value, m=m, n=n, l=l,
        norm_rms=dataio.normalized_rms(filt, test_z, mean),
        analytic_mse=analytic_mse(model, filt),
        rho_l=_rho_for(kind, rho_cache, l, n),
        cond_cy=cond_cy,
        max_inverse_dim=filt.max_inverse_dim,
        wall_ms=wall_ms,
    )


def _rho_for(kind: FilterKind, cache: SpectralCache, l: int | None, n: int) -> float:
    if kind is FilterKind.WIENER or l is None:
        return 0.0
    try:
        if kind in (FilterKind.LRW, FilterKind.CSW):
            spectrum = cache.whitened_cross_svd.s
            return truncation_power_loss(spectrum, min(l, n, spectrum.shape[0]), "lrw")
        return truncation_power_loss(cache, l, "jpc")
    except WclmmseError:
        return float("nan")


def run_l_sweep(source, m: int, n: int, l_grid, filters, seed: int = 0,
                test_draws: int = _DEFAULT_TEST_DRAWS) -> list[ExperimentResult]:
    """One row per (filter, truncation level); the unconstrained filter
    appears once with the level omitted."""
    kinds = _parse_kinds(filters)
    model, test_z, mean = _prepare(source, m, n, seed, test_draws)
    cond_cy = condition_number(model.c_y)
    rho_cache = SpectralCache(model)
    grid = [int(l) for l in l_grid]
    rows = []
    for kind in kinds:
        levels = [None] if kind is FilterKind.WIENER else grid
        for l in levels:
            rows.append(_sweep_cell(kind, model, l, test_z, mean, rho_cache, cond_cy))
    rows.sort(key=_sort_key)
    return rows


def run_m_sweep(series, m_grid, n: int, filters, l_policy: LPolicy,
                seed: int = 0) -> list[ExperimentResult]:
    """Re-window the series at each length and score every filter there."""
    kinds = _parse_kinds(filters)
    rows = []
    for m in (int(v) for v in m_grid):
        model, test_z, mean = _prepare(series, m, n, seed, _DEFAULT_TEST_DRAWS)
        cond_cy = condition_number(model.c_y)
        rho_cache = SpectralCache(model)
        for kind in kinds:
            l = None if kind is FilterKind.WIENER else l_policy.level_for(model, kind)
            rows.append(_sweep_cell(kind, model, l, test_z, mean, rho_cache, cond_cy))
    rows.sort(key=_sort_key)
    return rows


def run_condition_report(source, m_grid, n: int, seed: int = 0) -> list[tuple[int, float]]:
    """Condition number of the input covariance at each window length.

    For a covariance model the length-m input covariance is the trailing
    principal m x m block (the coordinates nearest the target block);
    for a series the covariance is re-estimated at each length.
    """
    rows = []
    for m in (int(v) for v in m_grid):
        if isinstance(source, CovarianceModel):
            if m > source.m:
                raise ValueError(f"m={m} exceeds model input dimension {source.m}")
            c_y = source.c_y[source.m - m :, source.m - m :]
        else:
            cfg = dataio.SeriesConfig(m=m, n=n, seed=seed)
            samples = dataio.window_samples(source, cfg)
            c_y = estimate_covariance(samples.train_samples(), n).c_y
        rows.append((m, condition_number(c_y)))
    return rows


def run_scaling_report(model: CovarianceModel, filter_kind, l_grid,
                       norm: str = "nuclear"):
    """Scaling study of one filter kind on a model (see diagnostics)."""
    return scaling_study(model, FilterKind(filter_kind), l_grid, norm)
