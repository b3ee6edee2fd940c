"""Closed-form replenishment mathematics.

Lead-time demand moments use the compound (gated) per-day variance
p*sigma^2 + p*(1-p)*mu^2, which accounts for days without demand; safety
stock, order-up-to level, and reorder point build on those moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import DemandStats


@dataclass(frozen=True)
class LeadTimeDemand:
    expected: float
    std: float

    def __post_init__(self) -> None:
        if self.expected < 0 or self.std < 0:
            raise ValueError("lead-time demand moments must be >= 0")


@dataclass(frozen=True)
class ReplenishmentParams:
    safety_stock: float
    order_up_to: float
    reorder_point: int
    safety_factor: float

    def __post_init__(self) -> None:
        if not self.order_up_to >= self.safety_stock >= 0:
            raise ValueError("need order_up_to >= safety_stock >= 0")
        if self.reorder_point < self.safety_stock:
            raise ValueError("reorder_point must cover the safety stock")


def daily_demand_variance(stats: DemandStats) -> float:
    """Per-day variance of gated demand (occurrence and size uncertainty)."""
    p = stats.demand_probability
    return p * stats.std_daily**2 + p * (1.0 - p) * stats.mean_daily**2


def lead_time_demand(stats: DemandStats, lead_time: int) -> LeadTimeDemand:
    if lead_time < 0:
        raise ValueError("lead_time must be >= 0")
    expected = lead_time * stats.demand_probability * stats.mean_daily
    std = math.sqrt(lead_time * daily_demand_variance(stats))
    return LeadTimeDemand(expected=expected, std=std)


def safety_stock(z: float, stats: DemandStats, lead_time: int) -> float:
    if z < 0:
        raise ValueError("safety factor must be >= 0")
    return z * lead_time_demand(stats, lead_time).std


def order_up_to(review_period: int, stats: DemandStats, z: float, lead_time: int) -> float:
    """Target level covering expected review-period demand plus safety stock."""
    if review_period < 1:
        raise ValueError("review_period must be >= 1")
    expected_review = review_period * stats.demand_probability * stats.mean_daily
    return expected_review + safety_stock(z, stats, lead_time)


def periodic_order_quantity(oup: float, current_inventory: int) -> int:
    """Units to order at a review: restore the (ceiled) target, never negative."""
    if oup < 0 or current_inventory < 0:
        raise ValueError("inputs must be >= 0")
    return max(0, math.ceil(oup) - current_inventory)


def reorder_point(stats: DemandStats, z: float, lead_time: int) -> int:
    """Trigger level: safety stock plus expected lead-time demand, rounded up."""
    ltd = lead_time_demand(stats, lead_time)
    return math.ceil(z * ltd.std + ltd.expected)


def replenishment_params(
    stats: DemandStats,
    z: float,
    lead_time: int,
    review_period: int = 7,
) -> ReplenishmentParams:
    """Bundle the derived quantities for a product under one safety factor."""
    ss = safety_stock(z, stats, lead_time)
    return ReplenishmentParams(
        safety_stock=ss,
        order_up_to=order_up_to(review_period, stats, z, lead_time),
        reorder_point=reorder_point(stats, z, lead_time),
        safety_factor=z,
    )
