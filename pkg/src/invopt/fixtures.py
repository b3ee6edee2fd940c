"""Synthetic demand-history and product fixtures for the bundled case study.

The four products mirror the case study's cost structure and demand
statistics; the history generator produces a full year whose estimated
statistics hit the targets by construction (draws are rescaled to the
exact mean and standard deviation before integer rounding).
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .domain import DemandStats, ProductSpec

CASE_STUDY_SPECS: dict[str, ProductSpec] = {
    "Pr1": ProductSpec("Pr1", purchase_cost=12.0, selling_price=16.10,
                       ordering_cost=1000.0, holding_rate=0.20, size=0.57,
                       lead_time=9, starting_stock=2750),
    "Pr2": ProductSpec("Pr2", purchase_cost=7.0, selling_price=8.60,
                       ordering_cost=1200.0, holding_rate=0.20, size=0.05,
                       lead_time=6, starting_stock=22500),
    "Pr3": ProductSpec("Pr3", purchase_cost=6.0, selling_price=10.20,
                       ordering_cost=1000.0, holding_rate=0.20, size=0.53,
                       lead_time=15, starting_stock=5200),
    "Pr4": ProductSpec("Pr4", purchase_cost=37.0, selling_price=68.0,
                       ordering_cost=1200.0, holding_rate=0.20, size=1.05,
                       lead_time=12, starting_stock=1400),
}

CASE_STUDY_STATS: dict[str, DemandStats] = {
    "Pr1": DemandStats(mean_daily=103.50, std_daily=37.32, demand_probability=0.76,
                       n_observations=365),
    "Pr2": DemandStats(mean_daily=648.55, std_daily=26.45, demand_probability=1.00,
                       n_observations=365),
    "Pr3": DemandStats(mean_daily=201.68, std_daily=31.08, demand_probability=0.70,
                       n_observations=365),
    "Pr4": DemandStats(mean_daily=150.06, std_daily=3.21, demand_probability=0.23,
                       n_observations=365),
}

# Fixed-Q quantities and continuous-review reorder points from the case study runs.
CASE_STUDY_ORDER_QUANTITY = {"Pr1": 4120, "Pr2": 33730, "Pr3": 7770, "Pr4": 2010}
CASE_STUDY_REORDER_POINT = {"Pr1": 4095, "Pr2": 33940, "Pr3": 7710, "Pr4": 2370}


def synthetic_history(
    stats: DemandStats, days: int = 365, seed: int = 0
) -> np.ndarray:
    """One year of integer daily demand matching the given statistics.

    Nonzero-day count is round(days * p); nonzero sizes are truncated
    normal draws rescaled to the exact target mean and sample std, then
    rounded to whole units.
    """
    rng = np.random.default_rng(seed)
    n_nonzero = int(round(days * stats.demand_probability))
    history = np.zeros(days, dtype=int)
    if n_nonzero == 0:
        return history
    if n_nonzero == 1 or stats.std_daily == 0:
        sizes = np.full(n_nonzero, stats.mean_daily)
    else:
        z = rng.standard_normal(n_nonzero)
        z = np.clip(z, -2.5, 2.5)
        z = (z - z.mean()) / z.std(ddof=1)
        sizes = stats.mean_daily + stats.std_daily * z
    positions = rng.permutation(days)[:n_nonzero]
    history[positions] = np.maximum(1, np.rint(sizes).astype(int))
    return history


def make_case_study_history(days: int = 365, seed: int = 0) -> dict[str, np.ndarray]:
    return {
        pid: synthetic_history(stats, days=days, seed=seed + i)
        for i, (pid, stats) in enumerate(CASE_STUDY_STATS.items())
    }


def write_history_csv(path: str | Path, history: dict[str, np.ndarray]) -> None:
    """Demand-history CSV: header ``day,<id1>,<id2>,...``, one row per day."""
    ids = list(history)
    days = len(next(iter(history.values())))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["day"] + ids)
        for day in range(days):
            writer.writerow([day + 1] + [int(history[pid][day]) for pid in ids])


def read_history_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("no observations") from None
        if len(header) < 2 or header[0] != "day":
            raise ValueError("expected header 'day,<id1>,<id2>,...'")
        ids = header[1:]
        columns: list[list[int]] = [[] for _ in ids]
        for row_number, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"row {row_number}: wrong column count")
            for i, cell in enumerate(row[1:]):
                try:
                    value = int(cell)
                except ValueError:
                    raise ValueError(f"row {row_number}: non-integer demand {cell!r}") from None
                if value < 0:
                    raise ValueError(f"row {row_number}: negative demand {value}")
                columns[i].append(value)
    if not columns[0]:
        raise ValueError("no observations")
    return {pid: np.array(col, dtype=int) for pid, col in zip(ids, columns)}
