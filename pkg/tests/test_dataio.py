"""Data pipeline tests: CSV ingestion, windowing, splitting, metrics, files."""

import json

import numpy as np
import pytest

from conftest import ar1_series
from wclmmse import (
    DegenerateDataError,
    DimensionError,
    FilterKind,
    LinearFilter,
    ModelError,
    NumericInputError,
    SeriesConfig,
    estimate_covariance,
    load_csv,
    normalized_rms,
    split,
    window_samples,
)
from wclmmse.dataio import (
    RESULT_FIELDS,
    write_condition_csv,
    write_results_csv,
    write_results_json,
)
from wclmmse.harness import ExperimentResult


def write(tmp_path, text, name="series.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_three_row_toy(self, tmp_path):
        path = write(tmp_path, "date,value\n2020-01-02,10.5\n2020-01-03,11.0\n2020-01-06,9.75\n")
        series = load_csv(path)
        assert len(series) == 3
        np.testing.assert_array_equal(series.values, [10.5, 11.0, 9.75])
        assert series.dates[0].isoformat() == "2020-01-02"

    def test_unsorted_rows_sorted(self, tmp_path):
        path = write(tmp_path, "date,value\n2020-01-03,2\n2020-01-02,1\n")
        series = load_csv(path)
        np.testing.assert_array_equal(series.values, [1.0, 2.0])

    def test_us_date_format_and_custom_columns(self, tmp_path):
        path = write(tmp_path, "DATE,OPEN,CLOSE\n1/02/1990,17.24,17.24\n1/03/1990,18.19,18.19\n")
        series = load_csv(path, date_column="DATE", value_column="CLOSE")
        assert series.dates[0].isoformat() == "1990-01-02"

    def test_malformed_value_names_line(self, tmp_path):
        path = write(tmp_path, "date,value\n2020-01-02,1.0\n2020-01-03,oops\n")
        with pytest.raises(NumericInputError, match=":3:"):
            load_csv(path)

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "day,value\n2020-01-02,1.0\n")
        with pytest.raises(DimensionError, match="missing column"):
            load_csv(path)

    def test_duplicate_date(self, tmp_path):
        path = write(tmp_path, "date,value\n2020-01-02,1.0\n2020-01-02,2.0\n")
        with pytest.raises(ModelError, match="duplicate"):
            load_csv(path)


class TestWindowSamples:
    def test_window_count(self):
        series = ar1_series(10, seed=0)
        out = window_samples(series, SeriesConfig(m=2, n=1, seed=0))
        assert out.k == 7
        assert out.samples.shape == (7, 3)

    def test_later_values_on_top(self):
        series = ar1_series(12, seed=1)
        cfg = SeriesConfig(m=3, n=2, seed=0)
        out = window_samples(series, cfg)
        # window i = [values[i+3 : i+5] | values[i : i+3]], mean-shifted
        for i in (0, 4):
            expected = np.concatenate([series.values[i + 3 : i + 5], series.values[i : i + 3]])
            np.testing.assert_array_equal(out.samples[i] + out.mean, expected)

    def test_constant_series_centers_to_zero(self):
        series = ar1_series(20, sigma=0.0, phi=0.0, level=20.0, seed=2)
        out = window_samples(series, SeriesConfig(m=3, n=1, seed=0))
        np.testing.assert_array_equal(out.samples, np.zeros_like(out.samples))
        model = estimate_covariance(out.train_samples(), n=1)
        np.testing.assert_array_equal(model.joint, np.zeros((4, 4)))

    def test_training_mean_is_zero_after_subtraction(self):
        series = ar1_series(200, seed=3)
        out = window_samples(series, SeriesConfig(m=5, n=2, seed=1))
        assert abs(out.train_samples().mean()) <= 1e-10

    def test_round_trip_reassembles_series(self):
        # the K = len - (m+n) window count leaves the final value uncovered
        series = ar1_series(40, seed=4)
        cfg = SeriesConfig(m=4, n=2, seed=0)
        out = window_samples(series, cfg)
        centered = series.values - out.mean
        rebuilt = np.full(40, np.nan)
        for i in range(out.k):
            rebuilt[i : i + 4] = out.samples[i, 2:]      # earlier block
            rebuilt[i + 4 : i + 6] = out.samples[i, :2]  # later block
        assert np.array_equal(rebuilt[:-1], centered[:-1])
        assert np.isnan(rebuilt[-1])

    def test_too_short(self):
        series = ar1_series(6, seed=5)
        with pytest.raises(DegenerateDataError):
            window_samples(series, SeriesConfig(m=4, n=2, seed=0))


class TestSplit:
    def test_sizes(self):
        series = ar1_series(16, seed=6)
        out = window_samples(series, SeriesConfig(m=4, n=2, test_fraction=0.2, seed=0))
        assert out.k == 10
        assert out.test.size == 2 and out.train.size == 8

    def test_deterministic_and_disjoint(self):
        series = ar1_series(30, seed=7)
        cfg = SeriesConfig(m=4, n=2, seed=11)
        one = window_samples(series, cfg)
        two = split(one, cfg)
        assert np.array_equal(one.test, two.test)
        assert np.array_equal(one.train, two.train)
        assert np.intersect1d(one.train, one.test).size == 0
        assert one.train.size + one.test.size == one.k

    def test_seed_changes_partition(self):
        series = ar1_series(30, seed=8)
        one = window_samples(series, SeriesConfig(m=4, n=2, seed=1))
        two = window_samples(series, SeriesConfig(m=4, n=2, seed=2))
        assert not np.array_equal(one.test, two.test)

    def test_degenerate_count(self):
        series = ar1_series(8, seed=9)
        with pytest.raises(DegenerateDataError):
            window_samples(series, SeriesConfig(m=3, n=1, seed=0))


class TestNormalizedRms:
    def test_perfect_filter_on_copy_task(self):
        rng = np.random.default_rng(10)
        a = rng.standard_normal((2, 3))
        y = rng.standard_normal((6, 3))
        z = np.concatenate([y @ a.T, y], axis=1)
        filt = LinearFilter(matrix=a, kind=FilterKind.WIENER)
        assert normalized_rms(filt, z, mean=1.3) == pytest.approx(0.0, abs=1e-14)

    def test_zero_filter_with_zero_mean_is_one(self):
        rng = np.random.default_rng(11)
        z = rng.standard_normal((40, 4))
        filt = LinearFilter(matrix=np.zeros((1, 3)), kind=FilterKind.WIENER)
        assert normalized_rms(filt, z, mean=0.0) == pytest.approx(1.0)

    def test_hand_computed_three_samples(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal((1, 2))
        z = rng.standard_normal((3, 3))
        mean = 0.7
        num = sum(np.sum((a @ zi[1:] - zi[:1]) ** 2) for zi in z) / 3.0
        den = sum(np.sum((zi[:1] + mean) ** 2) for zi in z) / 3.0
        expected = np.sqrt(num) / np.sqrt(den)
        filt = LinearFilter(matrix=a, kind=FilterKind.WIENER)
        assert normalized_rms(filt, z, mean) == pytest.approx(expected, rel=1e-12)

    def test_zero_denominator(self):
        filt = LinearFilter(matrix=np.zeros((1, 2)), kind=FilterKind.WIENER)
        z = np.zeros((3, 3))
        with pytest.raises(DegenerateDataError):
            normalized_rms(filt, z, mean=0.0)


class TestResultFiles:
    def rows(self):
        return [
            ExperimentResult(filter="wiener", m=8, n=2, l=None, norm_rms=0.5,
                             analytic_mse=1.25, rho_l=0.0, cond_cy=12.5,
                             max_inverse_dim=8, wall_ms=3.25),
            ExperimentResult(filter="jpc", m=8, n=2, l=3, norm_rms=float("nan"),
                             analytic_mse=float("nan"), rho_l=0.125, cond_cy=12.5,
                             max_inverse_dim=3, wall_ms=1.5),
        ]

    def test_csv_schema_and_empty_l(self, tmp_path):
        path = tmp_path / "out.csv"
        write_results_csv(self.rows(), path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(RESULT_FIELDS)
        assert lines[1].startswith("wiener,8,2,,0.5,")
        assert ",nan," in lines[2]

    def test_csv_bytes_stable(self, tmp_path):
        one, two = tmp_path / "a.csv", tmp_path / "b.csv"
        write_results_csv(self.rows(), one)
        write_results_csv(self.rows(), two)
        assert one.read_bytes() == two.read_bytes()

    def test_json_equivalent(self, tmp_path):
        csv_path, json_path = tmp_path / "r.csv", tmp_path / "r.json"
        write_results_csv(self.rows(), csv_path)
        write_results_json(self.rows(), json_path)
        records = json.loads(json_path.read_text())
        assert [r["filter"] for r in records] == ["wiener", "jpc"]
        assert records[0]["l"] is None
        assert records[0]["norm_rms"] == 0.5
        header = csv_path.read_text().splitlines()[0].split(",")
        assert set(records[0]) == set(header)

    def test_condition_csv(self, tmp_path):
        path = tmp_path / "cond.csv"
        write_condition_csv([(4, 1.0), (8, float("inf"))], path)
        lines = path.read_text().splitlines()
        assert lines[0] == "m,cond_cy"
        assert lines[1] == "4,1.0"
        assert lines[2] == "8,inf"
