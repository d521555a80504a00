"""Well-conditioned linear MMSE filtering.

A numpy/scipy library for linear minimum-mean-square-error estimation
when the input covariance is large and ill-conditioned: the classical
unconstrained filter, rank-truncated filters, truncations of the joint
covariance eigenbasis whose construction never inverts anything larger
than L x L, weighted-trace and determinant objectives, and an
experiment harness for time-series prediction benchmarks.
"""

from .diagnostics import (
    ScalingStudy,
    analytic_mse,
    best_l_search,
    det_objective,
    error_covariance,
    scaling_study,
    truncation_power_loss,
    weighted_trace_objective,
)
from .dataio import (
    RawSeries,
    SeriesConfig,
    load_csv,
    normalized_rms,
    split,
    window_samples,
)
from .errors import (
    DegenerateDataError,
    DimensionError,
    InsufficientDataError,
    InvalidSpectrumError,
    InvalidWeightError,
    ModelError,
    NumericInputError,
    RankError,
    SingularMatrixError,
    UndefinedConditionError,
    WclmmseError,
)
from .filters import (
    FilterKind,
    LinearFilter,
    Prefilter,
    SpectralCache,
    csw,
    det_optimal_weight,
    is_l_well_conditioned,
    jpc,
    jpc_simplified,
    lrw,
    lsjpc,
    lsjpc_simplified,
    weighted_filter,
    wiener,
    wiener_structured,
)
from .harness import (
    ExperimentResult,
    LPolicy,
    run_condition_report,
    run_l_sweep,
    run_m_sweep,
    run_scaling_report,
)
from .linalg import (
    InverseAudit,
    SymEig,
    Svd,
    condition_number,
    inv_sqrt_spd,
    matrix_norm,
    nuclear_norm,
    solve_spd,
    svd,
    sym_eig,
)
from .model import (
    CovarianceModel,
    SampleSet,
    assemble_joint,
    estimate_covariance,
    geometric_spectrum,
    sample_from_model,
    split_joint,
    synthetic_model,
)

__version__ = "0.1.0"

__all__ = [
    "ScalingStudy", "analytic_mse", "best_l_search", "det_objective",
    "error_covariance", "scaling_study", "truncation_power_loss",
    "weighted_trace_objective",
    "RawSeries", "SeriesConfig", "load_csv", "normalized_rms", "split",
    "window_samples",
    "DegenerateDataError", "DimensionError", "InsufficientDataError",
    "InvalidSpectrumError", "InvalidWeightError", "ModelError",
    "NumericInputError", "RankError", "SingularMatrixError",
    "UndefinedConditionError", "WclmmseError",
    "FilterKind", "LinearFilter", "Prefilter", "SpectralCache", "csw",
    "det_optimal_weight", "is_l_well_conditioned", "jpc", "jpc_simplified",
    "lrw", "lsjpc", "lsjpc_simplified", "weighted_filter", "wiener",
    "wiener_structured",
    "ExperimentResult", "LPolicy", "run_condition_report", "run_l_sweep",
    "run_m_sweep", "run_scaling_report",
    "InverseAudit", "SymEig", "Svd", "condition_number", "inv_sqrt_spd",
    "matrix_norm", "nuclear_norm", "solve_spd", "svd", "sym_eig",
    "CovarianceModel", "SampleSet", "assemble_joint", "estimate_covariance",
    "geometric_spectrum", "sample_from_model", "split_joint", "synthetic_model",
    "__version__",
]
