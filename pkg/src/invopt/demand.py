"""Demand estimation and stochastic daily-demand generation.

Daily demand is modeled as a Bernoulli purchase gate times a positive size
distribution: a uniform draw decides whether the day sees demand at all,
and only then is a size drawn. Sizes can come from a lognormal (default),
a normal, or a two-component normal mixture with a shifted tail; a
conditional wrapper repeats the previous observation on days flagged as
following an order trigger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .domain import DemandStats


@dataclass(frozen=True)
class GatedLognormal:
    stats: DemandStats

    def __post_init__(self) -> None:
        if self.stats.demand_probability > 0 and self.stats.mean_daily <= 0:
            raise ValueError("lognormal requires positive mean")


@dataclass(frozen=True)
class GatedNormal:
    stats: DemandStats


@dataclass(frozen=True)
class MixtureTail:
    """Normal body plus a tail component shifted up by ``tail_shift`` sigmas."""

    stats: DemandStats
    tail_weight: float = 0.1
    tail_shift: float = 3.0

    def __post_init__(self) -> None:
        if not 0 < self.tail_weight < 1:
            raise ValueError("tail_weight must be in (0, 1)")
        if self.tail_shift <= 0:
            raise ValueError("tail_shift must be > 0")


BaseModel = Union[GatedLognormal, GatedNormal, MixtureTail]


@dataclass(frozen=True)
class Conditional:
    """Wraps a base model; days following an order trigger echo the previous demand."""

    base: BaseModel


DemandModel = Union[GatedLognormal, GatedNormal, MixtureTail, Conditional]


@dataclass(frozen=True)
class DemandStream:
    """A fixed, reproducible sequence of daily demands."""

    values: tuple[int, ...]
    seed: int

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.values):
            raise ValueError("demand values must be >= 0")

    def __len__(self) -> int:
        return len(self.values)


def model_stats(model: DemandModel) -> DemandStats:
    return model.base.stats if isinstance(model, Conditional) else model.stats


def estimate_stats(history: Sequence[float]) -> DemandStats:
    """Estimate gated-demand parameters from a daily demand history.

    The occurrence probability is the fraction of nonzero days; mean and
    standard deviation (sample, n-1 denominator) are taken over nonzero
    days only.
    """
    arr = np.asarray(history, dtype=float)
    if arr.size == 0:
        raise ValueError("no observations")
    if np.any(arr < 0):
        raise ValueError("demand history must be non-negative")
    nonzero = arr[arr > 0]
    if nonzero.size == 0:
        return DemandStats(0.0, 0.0, 0.0, n_observations=int(arr.size))
    probability = nonzero.size / arr.size
    mean = float(np.mean(nonzero))
    std = float(np.std(nonzero, ddof=1)) if nonzero.size > 1 else 0.0
    return DemandStats(mean, std, probability, n_observations=int(arr.size))


def lognormal_params(mean: float, std: float) -> tuple[float, float]:
    """Moment-matched lognormal parameters for a given mean and std."""
    if mean <= 0:
        raise ValueError("lognormal requires positive mean")
    sigma_sq = math.log(1.0 + (std / mean) ** 2)
    mu = math.log(mean) - sigma_sq / 2.0
    return mu, math.sqrt(sigma_sq)


def _draw_size(model: BaseModel, rng: np.random.Generator) -> float:
    stats = model.stats
    if isinstance(model, GatedLognormal):
        if stats.std_daily == 0:
            return stats.mean_daily
        mu, sigma = lognormal_params(stats.mean_daily, stats.std_daily)
        return rng.lognormal(mu, sigma)
    if isinstance(model, GatedNormal):
        return rng.normal(stats.mean_daily, stats.std_daily)
    # MixtureTail: body with probability 1-w, shifted tail with probability w
    shift = model.tail_shift * stats.std_daily
    if rng.random() < model.tail_weight:
        return rng.normal(stats.mean_daily + shift, stats.std_daily)
    return rng.normal(stats.mean_daily, stats.std_daily)


def sample_day(model: DemandModel, rng: np.random.Generator) -> int:
    """Draw one day's demand: gate first, then size, rounded and clamped at zero."""
    if isinstance(model, Conditional):
        model = model.base
    p = model.stats.demand_probability
    if rng.random() > p:
        return 0
    return max(0, round(_draw_size(model, rng)))


def sample_day_conditional(
    model: DemandModel,
    rng: np.random.Generator,
    order_triggered_previously: bool,
    previous_demand: int,
) -> int:
    """Conditional draw: echo the previous demand after a trigger, else sample fresh.

    The echoed day consumes no random numbers (the conditional density is a
    point mass at the previous observation).
    """
    if order_triggered_previously:
        if previous_demand < 0:
            raise ValueError("previous_demand must be >= 0")
        return previous_demand
    return sample_day(model, rng)


def generate_stream(
    model: DemandModel,
    seed: int | np.random.SeedSequence,
    horizon: int = 365,
) -> DemandStream:
    """Generate a reproducible demand stream of ``horizon`` days."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    rng = np.random.default_rng(seed)
    values = tuple(sample_day(model, rng) for _ in range(horizon))
    seed_repr = seed if isinstance(seed, int) else int(seed.generate_state(1)[0])
    return DemandStream(values=values, seed=seed_repr)
