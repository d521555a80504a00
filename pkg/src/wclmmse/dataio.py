"""Time-series ingestion, windowing, train/test split, and result files.

A daily-valued series is cut into overlapping windows of m + n
consecutive values; the n later values form the prediction target X
(stored in the TOP coordinates, matching the model module's stacking
convention) and the m earlier values form the input Y below. A scalar
global mean, computed over the training windows only, is subtracted
from every entry and kept for adding back at evaluation time.
"""

from __future__ import annotations

import csv
import datetime
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DegenerateDataError,
    DimensionError,
    ModelError,
    NumericInputError,
)
from .filters import LinearFilter
from .model import SampleSet

__all__ = [
    "SeriesConfig",
    "RawSeries",
    "load_csv",
    "window_samples",
    "split",
    "normalized_rms",
    "RESULT_FIELDS",
    "write_results_csv",
    "write_results_json",
    "write_condition_csv",
    "write_scaling_csv",
]


@dataclass
class SeriesConfig:
    """Windowing and split parameters for one experiment.

    m: input window length (days), n: prediction length (days),
    test_fraction: share of windows reserved for out-of-sample
    evaluation, seed: partition seed. Only a single global scalar mean
    is supported.
    """

    m: int
    n: int
    test_fraction: float = 0.2
    seed: int = 0
    mean_mode: str = "scalar_global"

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise DimensionError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ModelError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if self.mean_mode != "scalar_global":
            raise ModelError(f"unsupported mean mode: {self.mean_mode!r}")


@dataclass
class RawSeries:
    """An ordered daily series: strictly increasing dates, finite values."""

    dates: list[datetime.date]
    values: NDArray[np.float64]
    source: str = ""

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise DimensionError("series values must be 1-D")
        if len(self.dates) != self.values.shape[0]:
            raise DimensionError("dates and values have different lengths")
        if not np.all(np.isfinite(self.values)):
            raise NumericInputError("series contains non-finite values")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise ModelError(f"dates not strictly increasing at {cur}")

    def __len__(self) -> int:
        return self.values.shape[0]


def _parse_date(text: str) -> datetime.date:
    text = text.strip()
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        pass
    try:
        return datetime.datetime.strptime(text, "%m/%d/%Y").date()
    except ValueError:
        raise ValueError(f"unparseable date: {text!r}") from None


def load_csv(path, date_column: str = "date", value_column: str = "value") -> RawSeries:
    """Read a header-bearing CSV into a date-sorted series.

    Column names are matched case-insensitively. Dates may be ISO-8601
    or M/D/YYYY. Rows are sorted by date internally; duplicate dates and
    malformed rows are errors that name the offending line.
    """
    path = Path(path)
    rows: list[tuple[datetime.date, float]] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise DegenerateDataError(f"{path}: empty file")
        lookup = {name.strip().lower(): name for name in reader.fieldnames}
        try:
            date_key = lookup[date_column.strip().lower()]
            value_key = lookup[value_column.strip().lower()]
        except KeyError as exc:
            raise DimensionError(
                f"{path}: missing column {exc.args[0]!r};"
                f" available: {reader.fieldnames}") from None
        for record in reader:
            line = reader.line_num
            try:
                date = _parse_date(record[date_key])
                value = float(record[value_key])
            except (TypeError, ValueError) as exc:
                raise NumericInputError(f"{path}:{line}: {exc}") from None
            if not np.isfinite(value):
                raise NumericInputError(f"{path}:{line}: non-finite value {value!r}")
            rows.append((date, value))
    rows.sort(key=lambda item: item[0])
    for (d1, _), (d2, _) in zip(rows, rows[1:]):
        if d1 == d2:
            raise ModelError(f"{path}: duplicate date {d1}")
    return RawSeries(
        dates=[d for d, _ in rows],
        values=np.array([v for _, v in rows], dtype=np.float64),
        source=str(path),
    )


def _draw_partition(k: int, test_fraction: float, seed: int):
    """Uniform without-replacement test draw; the one place it happens."""
    if k < 5:
        raise DegenerateDataError(f"need at least 5 windows to split, got {k}")
    test_size = int(round(test_fraction * k))
    rng = np.random.default_rng(seed)
    test = np.sort(rng.choice(k, size=test_size, replace=False)).astype(np.intp)
    mask = np.ones(k, dtype=bool)
    mask[test] = False
    train = np.flatnonzero(mask).astype(np.intp)
    return train, test

def window_samples(series: RawSeries, cfg: SeriesConfig) -> SampleSet:
    """Cut a series into K = len - (m+n) overlapping windows.

    Window i covers values[i : i+m+n]; its n later values go on top (X)
    and its m earlier values below (Y). The scalar mean of the training
    windows is subtracted from every entry and stored, so the returned
    set already carries the train/test partition for the configured
    seed (identical to what :func:`split` would draw).
    """
    length = len(series)
    m, n = cfg.m, cfg.n
    if length < m + n + 1:
        raise DegenerateDataError(
            f"series of length {length} too short for m+n = {m + n}")
    k = length - (m + n)
    windows = np.lib.stride_tricks.sliding_window_view(series.values, m + n)[:k]
    samples = np.concatenate([windows[:, m:], windows[:, :m]], axis=1)
    train, test = _draw_partition(k, cfg.test_fraction, cfg.seed)
    mean = float(samples[train].mean())
    return SampleSet(samples=samples - mean, mean=mean, train=train, test=test)


def split(sample_set: SampleSet, cfg: SeriesConfig) -> SampleSet:
    """Fill the train/test partition of a sample set (deterministic per seed)."""
    train, test = _draw_partition(sample_set.k, cfg.test_fraction, cfg.seed)
    return SampleSet(samples=sample_set.samples, mean=sample_set.mean,
                     train=train, test=test)


def normalized_rms(filt: LinearFilter, test_samples, mean: float) -> float:
    """RMS prediction error over the RMS magnitude of the (un-centered) targets.

    Each test vector holds the target block x in its top coordinates and
    the input block y below; ``mean`` is added back in the denominator
    so the normalization reflects the original scale of the data.
    """
    z = np.asarray(test_samples, dtype=np.float64)
    if z.ndim != 2 or z.shape[0] == 0:
        raise DegenerateDataError("test set must be a nonempty 2-D array")
    n = filt.n
    if z.shape[1] != n + filt.m:
        raise DimensionError(
            f"test vectors have length {z.shape[1]}, expected {n + filt.m}")
    x = z[:, :n]
    y = z[:, n:]
    err = filt.apply(y) - x
    num = float(np.mean(np.einsum("ij,ij->i", err, err)))
    shifted = x + mean
    den = float(np.mean(np.einsum("ij,ij->i", shifted, shifted)))
    if den <= 0.0:
        raise DegenerateDataError("zero-magnitude targets: normalization undefined")
    return float(np.sqrt(num) / np.sqrt(den))


RESULT_FIELDS = ("filter", "m", "n", "l", "norm_rms", "analytic_mse",
                 "rho_l", "cond_cy", "max_inverse_dim", "wall_ms")


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def write_results_csv(results, path) -> None:
    """Experiment rows in the fixed result schema; bytes depend only on values."""
    lines = [",".join(RESULT_FIELDS)]
    for row in results:
        record = row.as_dict() if hasattr(row, "as_dict") else dict(row)
        lines.append(",".join(_format_cell(record[f]) for f in RESULT_FIELDS))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_results_json(results, path) -> None:
    """The same rows as a JSON array."""
    records = []
    for row in results:
        record = row.as_dict() if hasattr(row, "as_dict") else dict(row)
        records.append({f: record[f] for f in RESULT_FIELDS})
    Path(path).write_text(json.dumps(records, indent=2) + "\n", encoding="utf-8")


def write_condition_csv(rows, path) -> None:
    """(m, cond_cy) pairs from a condition-number sweep."""
    lines = ["m,cond_cy"]
    for m, cond in rows:
        lines.append(f"{int(m)},{_format_cell(float(cond))}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_scaling_csv(study, path) -> None:
    """Scaling-study rows: level, loss, distance, MSE gap, Gram defect."""
    lines = ["l,rho_l,dist,mse_gap,gram_defect"]
    for i in range(study.l.shape[0]):
        lines.append(",".join([
            str(int(study.l[i])),
            _format_cell(float(study.rho_l[i])),
            _format_cell(float(study.dist[i])),
            _format_cell(float(study.mse_gap[i])),
            _format_cell(float(study.gram_defect[i])),
        ]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
