"""Covariance data model, empirical estimation, and synthetic generators.

The stacking convention used everywhere in this package: the joint vector
holds the target block X in its TOP ``n`` coordinates and the input block
Y in the BOTTOM ``m`` coordinates. :func:`assemble_joint` and
:func:`split_joint` are the single source of truth for that layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DimensionError,
    InsufficientDataError,
    InvalidSpectrumError,
    ModelError,
    NumericInputError,
)
from .linalg import sym_eig

__all__ = [
    "CovarianceModel",
    "SampleSet",
    "assemble_joint",
    "split_joint",
    "estimate_covariance",
    "geometric_spectrum",
    "synthetic_model",
    "sample_from_model",
]

_SYM_RTOL = 1e-10


def assemble_joint(c_x, c_xy, c_y) -> NDArray[np.float64]:
    """Joint covariance [[c_x, c_xy], [c_xy', c_y]] (X block on top)."""
    return np.block([[c_x, c_xy], [c_xy.T, c_y]])


def split_joint(c_z, n: int):
    """Extract (c_x, c_xy, c_y) blocks from a joint covariance.

    ``n`` is the dimension of the X block, which occupies the top-left
    corner; the remainder is Y.
    """
    c_z = np.asarray(c_z, dtype=np.float64)
    d = c_z.shape[0]
    if not 0 <= n <= d:
        raise DimensionError(f"block size n={n} outside [0, {d}]")
    return (
        c_z[:n, :n].copy(),
        c_z[:n, n:].copy(),
        c_z[n:, n:].copy(),
    )


def _check_symmetric(a: np.ndarray, name: str) -> None:
    if a.size == 0:
        return
    scale = np.abs(a).max()
    if scale == 0.0:
        return
    if np.abs(a - a.T).max() > _SYM_RTOL * scale:
        raise ModelError(f"{name} is not symmetric within {_SYM_RTOL:g} relative")


@dataclass
class CovarianceModel:
    """The covariance triple (c_x, c_y, c_xy) plus the assembled joint c_z.

    ``n`` is the dimension of the estimated block X, ``m`` of the input
    block Y. Instances are treated as immutable after construction; the
    joint covariance, when stored, is always the exact block assembly of
    the triple, never an independent estimate.
    """

    n: int
    m: int
    c_x: NDArray[np.float64]
    c_y: NDArray[np.float64]
    c_xy: NDArray[np.float64]
    c_z: NDArray[np.float64] | None = None

    def __post_init__(self) -> None:
        self.c_x = np.asarray(self.c_x, dtype=np.float64)
        self.c_y = np.asarray(self.c_y, dtype=np.float64)
        self.c_xy = np.asarray(self.c_xy, dtype=np.float64)
        n, m = self.n, self.m
        if self.c_x.shape != (n, n):
            raise DimensionError(f"c_x has shape {self.c_x.shape}, expected {(n, n)}")
        if self.c_y.shape != (m, m):
            raise DimensionError(f"c_y has shape {self.c_y.shape}, expected {(m, m)}")
        if self.c_xy.shape != (n, m):
            raise DimensionError(f"c_xy has shape {self.c_xy.shape}, expected {(n, m)}")
        for block, name in ((self.c_x, "c_x"), (self.c_y, "c_y")):
            if block.size and not np.all(np.isfinite(block)):
                raise NumericInputError(f"{name} contains non-finite entries")
            _check_symmetric(block, name)
        if self.c_z is not None:
            self.c_z = np.asarray(self.c_z, dtype=np.float64)
            if self.c_z.shape != (n + m, n + m):
                raise DimensionError(
                    f"c_z has shape {self.c_z.shape}, expected {(n + m, n + m)}")
            if not np.array_equal(self.c_z, assemble_joint(self.c_x, self.c_xy, self.c_y)):
                raise ModelError("c_z does not equal the block assembly of the triple")

    @property
    def dim(self) -> int:
        return self.n + self.m

    @property
    def joint(self) -> NDArray[np.float64]:
        """The (n+m) x (n+m) joint covariance, assembled on demand."""
        if self.c_z is not None:
            return self.c_z
        return assemble_joint(self.c_x, self.c_xy, self.c_y)

    @classmethod
    def from_joint(cls, c_z, n: int) -> "CovarianceModel":
        c_z = np.asarray(c_z, dtype=np.float64)
        c_x, c_xy, c_y = split_joint(c_z, n)
        return cls(n=n, m=c_z.shape[0] - n, c_x=c_x, c_y=c_y, c_xy=c_xy, c_z=c_z)


@dataclass
class SampleSet:
    """Windowed data vectors with a train/test partition and stored mean.

    ``samples`` is a (k, n+m) array; ``mean`` is the scalar subtracted
    from every entry before storage (0.0 for synthetic draws). The
    partition index arrays cover a subset of the rows with no overlap.
    """

    samples: NDArray[np.float64]
    mean: float = 0.0
    train: NDArray[np.intp] = field(default_factory=lambda: np.empty(0, dtype=np.intp))
    test: NDArray[np.intp] = field(default_factory=lambda: np.empty(0, dtype=np.intp))

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 2:
            raise DimensionError("samples must be a 2-D (k, n+m) array")
        self.train = np.asarray(self.train, dtype=np.intp)
        self.test = np.asarray(self.test, dtype=np.intp)
        k = self.samples.shape[0]
        for idx, name in ((self.train, "train"), (self.test, "test")):
            if idx.size and (idx.min() < 0 or idx.max() >= k):
                raise DimensionError(f"{name} indices out of range for k={k}")
        if np.intersect1d(self.train, self.test).size:
            raise ModelError("train and test partitions overlap")

    @property
    def k(self) -> int:
        return self.samples.shape[0]

    def train_samples(self) -> NDArray[np.float64]:
        return self.samples[self.train]

    def test_samples(self) -> NDArray[np.float64]:
        return self.samples[self.test]


def estimate_covariance(samples, n: int) -> CovarianceModel:
    """Empirical covariance of zero-mean sample vectors, (K-1) denominator.

    ``samples`` is an iterable of equal-length vectors (or a (k, d)
    array) whose mean has already been subtracted; ``n`` is the size of
    the X block occupying the top coordinates of each vector. The K-1
    denominator is fixed, not configurable.
    """
    z = np.asarray(samples, dtype=np.float64)
    if z.ndim == 1:
        raise DimensionError("samples must be a sequence of vectors")
    if z.ndim != 2:
        raise DimensionError(f"samples must be 2-D, got ndim={z.ndim}")
    k, d = z.shape
    if k < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {k}")
    if not np.all(np.isfinite(z)):
        raise NumericInputError("samples contain non-finite entries")
    c_z = z.T @ z / (k - 1)
    c_z = 0.5 * (c_z + c_z.T)
    return CovarianceModel.from_joint(c_z, n)


def geometric_spectrum(size: int, scale: float = 1.0, ratio: float = 0.6) -> NDArray[np.float64]:
    """Spectrum scale * ratio**i for i = 0..size-1."""
    if scale <= 0.0 or ratio <= 0.0:
        raise InvalidSpectrumError("geometric spectrum needs scale > 0 and ratio > 0")
    return scale * ratio ** np.arange(size, dtype=np.float64)


def synthetic_model(n: int, m: int, spectrum, seed: int = 0) -> CovarianceModel:
    """Random covariance model with a prescribed joint spectrum.

    Draws a Haar-like orthonormal basis from the QR of a seeded Gaussian
    matrix, forms the joint covariance from the (descending-sorted)
    spectrum, and partitions it. Deterministic per seed.
    """
    if n < 1 or m < 1:
        raise DimensionError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    spec = np.asarray(spectrum, dtype=np.float64)
    if spec.shape != (n + m,):
        raise InvalidSpectrumError(
            f"spectrum must have length n+m={n + m}, got shape {spec.shape}")
    if not np.all(spec > 0.0):
        bad = int(np.argmin(spec))
        raise InvalidSpectrumError(
            f"spectrum entry {bad} is nonpositive ({spec[bad]:g})")
    spec = np.sort(spec)[::-1]
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n + m, n + m)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    c_z = (q * spec) @ q.T
    c_z = 0.5 * (c_z + c_z.T)
    return CovarianceModel.from_joint(c_z, n)


def sample_from_model(model: CovarianceModel, k: int, seed: int = 0) -> SampleSet:
    """Draw k i.i.d. zero-mean Gaussian vectors with covariance model.joint.

    Uses the symmetric square root of the joint covariance; negative
    eigenvalues beyond -1e-10 * lambda_max are a model error, smaller
    ones are clipped to zero. Deterministic per seed.
    """
    if k < 0:
        raise DimensionError(f"sample count must be nonnegative, got {k}")
    eig = sym_eig(model.joint)
    vals = eig.eigenvalues
    lam_max = max(float(vals[0]), 0.0) if vals.size else 0.0
    if vals.size and float(vals[-1]) < -1e-10 * lam_max:
        raise ModelError(
            f"joint covariance is not PSD: smallest eigenvalue {vals[-1]:.3e}")
    root = (eig.eigenvectors * np.sqrt(np.clip(vals, 0.0, None))) @ eig.eigenvectors.T
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((k, model.dim))
    samples = draws @ root.T
    return SampleSet(
        samples=samples,
        mean=0.0,
        train=np.arange(k, dtype=np.intp),
        test=np.empty(0, dtype=np.intp),
    )
