"""Replication runner: many independent simulated years, aggregated.

Replication i always uses a seed derived from (base_seed, i), so two
policies evaluated under the same plan consume identical demand streams
per index (common random numbers). Aggregation happens in index order,
making results independent of worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .domain import Policy, ProductSpec
from .demand import DemandModel, generate_stream
from .engine import SimulationResult, simulate_year, simulate_year_conditional
from .policy import ReplenishmentParams


@dataclass(frozen=True)
class ReplicationPlan:
    n_replications: int = 1000
    base_seed: int = 0
    crn: bool = True
    workers: int | str = 1

    def __post_init__(self) -> None:
        if self.n_replications < 1:
            raise ValueError("n_replications must be >= 1")

    @property
    def n_jobs(self) -> int:
        return -1 if self.workers == "auto" else int(self.workers)


@dataclass(frozen=True)
class ReplicationSummary:
    n: int
    mean_profit: float
    std_profit: float
    mean_lost_fraction: float
    mean_end_inventory: float
    profits: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean_profit": self.mean_profit,
            "std_profit": self.std_profit,
            "mean_lost_fraction": self.mean_lost_fraction,
            "mean_end_inventory": self.mean_end_inventory,
        }


@dataclass(frozen=True)
class PairedComparison:
    n: int
    mean_difference: float
    std_difference: float
    differences: tuple[float, ...]


def replication_seed(base_seed: int, index: int) -> int:
    """64-bit mixed seed for one replication; stable across runs and platforms."""
    ss = np.random.SeedSequence([base_seed, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _one_replication(
    spec: ProductSpec,
    policy: Policy,
    model: DemandModel,
    params: ReplenishmentParams | None,
    seed: int,
    sampling: str,
    horizon: int,
) -> tuple[float, float, float]:
    if sampling == "conditional":
        result: SimulationResult = simulate_year_conditional(
            spec, policy, model, seed, params, horizon=horizon, keep_trace=False
        )
    else:
        stream = generate_stream(model, seed, horizon=horizon)
        result = simulate_year(
            spec, policy, stream, params, horizon=horizon, keep_trace=False
        )
    lost_fraction = (
        result.total_lost / result.total_demand if result.total_demand > 0 else 0.0
    )
    return result.costs.profit, lost_fraction, result.mean_end_inventory


def _summarize(rows: list[tuple[float, float, float]]) -> ReplicationSummary:
    profits = np.array([r[0] for r in rows])
    std = float(np.std(profits, ddof=1)) if len(rows) > 1 else 0.0
    return ReplicationSummary(
        n=len(rows),
        mean_profit=float(np.mean(profits)),
        std_profit=std,
        mean_lost_fraction=float(np.mean([r[1] for r in rows])),
        mean_end_inventory=float(np.mean([r[2] for r in rows])),
        profits=tuple(float(p) for p in profits),
    )


def evaluate_policy(
    spec: ProductSpec,
    policy: Policy,
    model: DemandModel,
    params: ReplenishmentParams | None,
    plan: ReplicationPlan,
    sampling: str = "random",
    horizon: int = 365,
) -> ReplicationSummary:
    """Run ``plan.n_replications`` independent years and aggregate profit statistics."""
    if sampling not in ("random", "conditional"):
        raise ValueError(f"unknown sampling mode: {sampling}")
    seeds = [replication_seed(plan.base_seed, i) for i in range(plan.n_replications)]
    if plan.n_jobs == 1:
        rows = [
            _one_replication(spec, policy, model, params, s, sampling, horizon)
            for s in seeds
        ]
    else:
        rows = Parallel(n_jobs=plan.n_jobs)(
            delayed(_one_replication)(spec, policy, model, params, s, sampling, horizon)
            for s in seeds
        )
    return _summarize(rows)


def compare_policies(
    spec: ProductSpec,
    policy_a: Policy,
    policy_b: Policy,
    model: DemandModel,
    params: ReplenishmentParams | None,
    plan: ReplicationPlan,
    sampling: str = "random",
) -> PairedComparison:
    """Per-replication profit differences (a - b) under shared demand streams."""
    if not plan.crn:
        raise ValueError("paired comparison requires common random numbers")
    a = evaluate_policy(spec, policy_a, model, params, plan, sampling)
    b = evaluate_policy(spec, policy_b, model, params, plan, sampling)
    diffs = np.array(a.profits) - np.array(b.profits)
    std = float(np.std(diffs, ddof=1)) if len(diffs) > 1 else 0.0
    return PairedComparison(
        n=plan.n_replications,
        mean_difference=float(np.mean(diffs)),
        std_difference=std,
        differences=tuple(float(d) for d in diffs),
    )
