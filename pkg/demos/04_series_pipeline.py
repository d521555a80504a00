"""
Time-series prediction pipeline
===============================

End to end at desk scale: synthesize a daily series, window it into
overlapping (earlier m, later n) sample vectors, split train/test,
estimate the joint covariance from the training windows, and compare
filters on held-out windows. The same flow drives the ``wclmmse`` CLI.
"""

import datetime
import tempfile
from pathlib import Path

import numpy as np

from wclmmse import (
    RawSeries,
    SeriesConfig,
    estimate_covariance,
    condition_number,
    jpc,
    lrw,
    normalized_rms,
    run_l_sweep,
    wiener,
    window_samples,
)
from wclmmse.dataio import write_results_csv

# --- synthesize a persistent daily series around a level of 20 ---------
rng = np.random.default_rng(11)
length, phi = 600, 0.9
noise = rng.standard_normal(length)
values = np.empty(length)
values[0] = 0.0
for i in range(1, length):
    values[i] = phi * values[i - 1] + noise[i]
dates = [datetime.date(2015, 1, 1) + datetime.timedelta(days=i) for i in range(length)]
series = RawSeries(dates=dates, values=values + 20.0)

# --- window, split, estimate -------------------------------------------
cfg = SeriesConfig(m=12, n=3, test_fraction=0.2, seed=0)
samples = window_samples(series, cfg)
print(f"{samples.k} windows of length {cfg.m + cfg.n};"
      f" {samples.train.size} train / {samples.test.size} test;"
      f" subtracted mean {samples.mean:.3f}")

model = estimate_covariance(samples.train_samples(), cfg.n)
print(f"condition number of the input covariance: {condition_number(model.c_y):.2e}")

# --- score filters out of sample ----------------------------------------
test_z = samples.test_samples()
for name, filt in (("wiener", wiener(model)),
                   ("lrw l=6", lrw(model, 6)),
                   ("jpc l=6", jpc(model, 6))):
    print(f"  {name:<10} normalized rms = {normalized_rms(filt, test_z, samples.mean):.4f}")

# --- the harness produces the same numbers as plot-ready rows -----------
rows = run_l_sweep(series, cfg.m, cfg.n, [3, 6, 9, 12], ["wiener", "jpc"], seed=0)
out = Path(tempfile.mkdtemp()) / "l_sweep.csv"
write_results_csv(rows, out)
print(f"\nwrote {out}")
for row in rows:
    level = "-" if row.l is None else row.l
    print(f"  {row.filter:<8} l={level:<3} rms={row.norm_rms:.4f}"
          f" largest inverse={row.max_inverse_dim}")
