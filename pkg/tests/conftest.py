"""Shared model builders for the test suite."""

import datetime

import numpy as np

from wclmmse import CovarianceModel, RawSeries


def haar_model(n, m, ratio=0.7, seed=0, scale=1.0):
    """Random-basis covariance model with a geometric joint spectrum."""
    from wclmmse import geometric_spectrum, synthetic_model

    return synthetic_model(n, m, geometric_spectrum(n + m, scale, ratio), seed=seed)


def tail_mixed_model(n, m, ratio=0.7, mix=1e-3, seed=0):
    """Covariance model whose leading joint eigenvectors are nearly pure-Y.

    Cross-information enters through n rotation pairs whose X-heavy
    partners carry the smallest eigenvalues, so every truncation keeps
    Y-dominated directions (Gram defect ~ mix**2). This is the regime
    where the inverse-free filter approximations are accurate.
    """
    d = n + m
    rng = np.random.default_rng(seed)
    qa, ra = np.linalg.qr(rng.standard_normal((n, n)))
    qa = qa * np.sign(np.diag(ra))
    qb, rb = np.linalg.qr(rng.standard_normal((m, m)))
    qb = qb * np.sign(np.diag(rb))
    v = np.zeros((d, d))
    s, c = mix, np.sqrt(1.0 - mix * mix)
    for i in range(n):
        v[:n, i] = s * qa[:, i]
        v[n:, i] = c * qb[:, i]
        v[:n, m + i] = c * qa[:, i]
        v[n:, m + i] = -s * qb[:, i]
    for i in range(n, m):
        v[n:, i] = qb[:, i]
    spectrum = ratio ** np.arange(d)
    c_z = (v * spectrum) @ v.T
    return CovarianceModel.from_joint(0.5 * (c_z + c_z.T), n)


def ar1_model(n, m, phi=0.9, noise=0.0):
    """Stationary AR(1) joint covariance, stacked [later n | earlier m]."""
    d = n + m
    t = np.arange(d)
    time_cov = phi ** np.abs(t[:, None] - t[None, :]) + noise * np.eye(d)
    order = np.concatenate([np.arange(m, d), np.arange(m)])
    return CovarianceModel.from_joint(time_cov[np.ix_(order, order)], n)


def ar1_series(length, phi=0.8, level=20.0, sigma=1.0, seed=0):
    """A synthetic daily series for pipeline tests."""
    rng = np.random.default_rng(seed)
    values = np.empty(length)
    values[0] = 0.0
    for i in range(1, length):
        values[i] = phi * values[i - 1] + sigma * rng.standard_normal()
    dates = [datetime.date(2000, 1, 3) + datetime.timedelta(days=i) for i in range(length)]
    return RawSeries(dates=dates, values=values + level, source="synthetic-ar1")
