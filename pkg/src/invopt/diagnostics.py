"""Convergence diagnostics for replication profit series.

Running mean, batch means, prefix standard errors, and a correlogram,
plus a simple converged/not-converged verdict combining relative
precision with whiteness of the series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConvergenceReport:
    running_mean: np.ndarray
    batch_means: np.ndarray
    batch_size: int
    standard_error: np.ndarray
    autocorrelation: np.ndarray
    converged: bool


def running_mean(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("empty series")
    return np.cumsum(x) / np.arange(1, x.size + 1)


def batch_means(x, batch_size: int) -> np.ndarray:
    """Means of consecutive disjoint batches; a trailing partial batch is dropped."""
    x = np.asarray(x, dtype=float)
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    if batch_size > x.size:
        raise ValueError("batch larger than sample")
    n_batches = x.size // batch_size
    return x[: n_batches * batch_size].reshape(n_batches, batch_size).mean(axis=1)


def standard_error_series(x) -> np.ndarray:
    """SE of the mean after each prefix; index 0 is defined as 0."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two observations")
    counts = np.arange(1, x.size + 1)
    means = np.cumsum(x) / counts
    sq = np.cumsum(x**2)
    # sample variance of each prefix (n-1 denominator); guard the first element
    with np.errstate(invalid="ignore", divide="ignore"):
        var = (sq - counts * means**2) / (counts - 1)
    var = np.clip(var, 0.0, None)
    se = np.sqrt(var / counts)
    se[0] = 0.0
    return se


def autocorrelation(x, max_lag: int) -> np.ndarray:
    """Lag 1..max_lag autocorrelation, biased (denominator-n) estimator."""
    x = np.asarray(x, dtype=float)
    if x.size < max_lag + 2:
        raise ValueError("series too short for requested lags")
    dev = x - x.mean()
    denom = float(np.sum(dev**2))
    if denom == 0.0:
        raise ValueError("degenerate series")
    return np.array(
        [float(np.sum(dev[:-k] * dev[k:])) / denom for k in range(1, max_lag + 1)]
    )


def assess_convergence(
    x,
    batch_size: int | None = None,
    max_lag: int | None = None,
    rel_tol: float = 0.01,
) -> ConvergenceReport:
    """Full diagnostic sweep over a profit series.

    Converged means the final standard error is below ``rel_tol`` of the
    absolute mean and at least 90% of autocorrelations sit inside the
    white-noise band.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 100:
        raise ValueError("need at least 100 observations")
    if batch_size is None:
        batch_size = n // 20
    if max_lag is None:
        max_lag = min(50, n // 4)

    rmean = running_mean(x)
    bmeans = batch_means(x, batch_size)
    se = standard_error_series(x)
    acf = autocorrelation(x, max_lag)

    final_mean = rmean[-1]
    final_se = se[-1]
    precise = (
        final_se < rel_tol * abs(final_mean) if final_mean != 0 else final_se == 0
    )
    band = 1.96 / np.sqrt(n)
    white = float(np.mean(np.abs(acf) <= band)) >= 0.9
    return ConvergenceReport(
        running_mean=rmean,
        batch_means=bmeans,
        batch_size=batch_size,
        standard_error=se,
        autocorrelation=acf,
        converged=bool(precise and white),
    )
