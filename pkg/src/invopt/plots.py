"""Figure rendering for CLI reports.

Each report command writes its delimited data first; these helpers render
the matching matplotlib figure next to it. The Agg backend is forced so
rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .diagnostics import ConvergenceReport

# keep PNG output byte-stable across runs
_SAVEFIG_KWARGS = {"dpi": 120, "metadata": {"Software": None}}


def save_convergence_figure(report: ConvergenceReport, title: str, path: str | Path) -> None:
    """Four-panel convergence figure: running mean, batch means, SE, correlogram."""
    n = len(report.running_mean)
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    ax = axes[0, 0]
    ax.plot(np.arange(1, n + 1), report.running_mean, lw=0.8)
    ax.axhline(report.running_mean[-1], color="gray", ls="--", lw=0.8)
    ax.set_title("Running mean")
    ax.set_xlabel("replication")

    ax = axes[0, 1]
    ax.plot(
        np.arange(1, len(report.batch_means) + 1),
        report.batch_means,
        marker="o",
        ms=3,
        lw=0.8,
    )
    ax.set_title(f"Batch means (b={report.batch_size})")
    ax.set_xlabel("batch")

    ax = axes[1, 0]
    ax.plot(np.arange(1, n + 1), report.standard_error, lw=0.8)
    ax.set_title("Standard error")
    ax.set_xlabel("replication")

    ax = axes[1, 1]
    lags = np.arange(1, len(report.autocorrelation) + 1)
    band = 1.96 / np.sqrt(n)
    ax.stem(lags, report.autocorrelation, basefmt=" ")
    ax.axhline(band, color="gray", ls="--", lw=0.8)
    ax.axhline(-band, color="gray", ls="--", lw=0.8)
    ax.set_title("Autocorrelation")
    ax.set_xlabel("lag")

    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG_KWARGS)
    plt.close(fig)


def save_surface_figure(
    r_values: np.ndarray,
    q_values: np.ndarray,
    profit_grid: np.ndarray,
    title: str,
    path: str | Path,
) -> None:
    """Contour plot of mean profit over the (r, Q) lattice."""
    fig, ax = plt.subplots(figsize=(7, 5.5))
    if len(r_values) > 1 and len(q_values) > 1:
        contour = ax.contourf(r_values, q_values, profit_grid.T, levels=20, cmap="viridis")
        fig.colorbar(contour, ax=ax, label="mean profit")
    else:
        ax.scatter(
            np.repeat(r_values, len(q_values)),
            np.tile(q_values, len(r_values)),
            c=profit_grid.ravel(),
            cmap="viridis",
        )
    ax.set_xlabel("reorder point r")
    ax.set_ylabel("order quantity Q")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG_KWARGS)
    plt.close(fig)


def save_history_figure(points, values, best_point, title: str, path: str | Path) -> None:
    """Scatter of evaluated (r, Q) points colored by mean profit."""
    points = np.asarray(points, dtype=float)
    fig, ax = plt.subplots(figsize=(7, 5.5))
    sc = ax.scatter(points[:, 0], points[:, 1], c=values, cmap="viridis", s=30)
    ax.scatter([best_point[0]], [best_point[1]], marker="*", s=200, c="red", label="best")
    fig.colorbar(sc, ax=ax, label="mean profit")
    ax.set_xlabel("reorder point r")
    ax.set_ylabel("order quantity Q")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG_KWARGS)
    plt.close(fig)
