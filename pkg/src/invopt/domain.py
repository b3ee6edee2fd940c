"""Shared value types: product economics, demand statistics, policies, cost accounting.

All types are frozen dataclasses validated at construction; instances are
safe to share across worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass

DAYS_PER_YEAR = 365

# Relative tolerance for the profit accounting identity.
MONEY_RTOL = 1e-9


@dataclass(frozen=True)
class ProductSpec:
    """Economic and physical parameters of one product."""

    id: str
    purchase_cost: float
    selling_price: float
    ordering_cost: float
    holding_rate: float
    size: float
    lead_time: int
    starting_stock: int

    def __post_init__(self) -> None:
        if self.selling_price <= 0:
            raise ValueError(f"{self.id}: selling_price must be > 0")
        if self.purchase_cost <= 0:
            raise ValueError(f"{self.id}: purchase_cost must be > 0")
        if self.ordering_cost < 0:
            raise ValueError(f"{self.id}: ordering_cost must be >= 0")
        if not 0 < self.holding_rate <= 1:
            raise ValueError(f"{self.id}: holding_rate must be in (0, 1]")
        if self.size <= 0:
            raise ValueError(f"{self.id}: size must be > 0")
        if self.lead_time < 0:
            raise ValueError(f"{self.id}: lead_time must be >= 0")
        if self.starting_stock < 0:
            raise ValueError(f"{self.id}: starting_stock must be >= 0")


@dataclass(frozen=True)
class DemandStats:
    """Demand parameters estimated from history.

    ``mean_daily`` and ``std_daily`` describe demand on days with demand;
    ``demand_probability`` is the chance any given day sees demand at all.
    """

    mean_daily: float
    std_daily: float
    demand_probability: float
    n_observations: int = 0

    def __post_init__(self) -> None:
        if self.mean_daily < 0:
            raise ValueError("mean_daily must be >= 0")
        if self.std_daily < 0:
            raise ValueError("std_daily must be >= 0")
        if not 0 <= self.demand_probability <= 1:
            raise ValueError("demand_probability must be in [0, 1]")
        if self.demand_probability == 0 and self.mean_daily != 0:
            raise ValueError("zero demand probability requires zero mean")


@dataclass(frozen=True)
class PeriodicFixedQ:
    """Order a fixed quantity every ``review_period`` days."""

    review_period: int
    order_quantity: int

    def __post_init__(self) -> None:
        if self.review_period < 1:
            raise ValueError("review_period must be >= 1")
        if self.order_quantity < 0:
            raise ValueError("order_quantity must be >= 0")


@dataclass(frozen=True)
class PeriodicUpTo:
    """Replenish to the order-up-to level every ``review_period`` days."""

    review_period: int
    safety_factor: float

    def __post_init__(self) -> None:
        if self.review_period < 1:
            raise ValueError("review_period must be >= 1")
        if self.safety_factor < 0:
            raise ValueError("safety_factor must be >= 0")


@dataclass(frozen=True)
class ContinuousFixedQ:
    """Order a fixed quantity whenever inventory position falls to the reorder point."""

    reorder_point: int
    order_quantity: int

    def __post_init__(self) -> None:
        if self.reorder_point < 0:
            raise ValueError("reorder_point must be >= 0")
        if self.order_quantity < 0:
            raise ValueError("order_quantity must be >= 0")


@dataclass(frozen=True)
class ContinuousUpTo:
    """Continuous-review variant that replenishes up to a target level.

    The target is typically safety stock plus expected lead-time demand;
    provided as an alternative to the fixed-Q rule.
    """

    reorder_point: int
    order_up_to: float

    def __post_init__(self) -> None:
        if self.reorder_point < 0:
            raise ValueError("reorder_point must be >= 0")
        if self.order_up_to < 0:
            raise ValueError("order_up_to must be >= 0")


Policy = PeriodicFixedQ | PeriodicUpTo | ContinuousFixedQ | ContinuousUpTo


@dataclass(frozen=True)
class CostBreakdown:
    """One year's revenue, cost components, and resulting profit."""

    revenue: float
    holding_cost: float
    ordering_cost: float
    purchase_cost: float
    profit: float

    def __post_init__(self) -> None:
        for name in ("revenue", "holding_cost", "ordering_cost", "purchase_cost"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        expected = self.revenue - (
            self.holding_cost + self.ordering_cost + self.purchase_cost
        )
        scale = max(1.0, abs(expected), abs(self.profit))
        if abs(self.profit - expected) > MONEY_RTOL * scale:
            raise ValueError("profit does not match revenue minus costs")

    @classmethod
    def from_components(
        cls,
        revenue: float,
        holding_cost: float,
        ordering_cost: float,
        purchase_cost: float,
    ) -> "CostBreakdown":
        profit = revenue - (holding_cost + ordering_cost + purchase_cost)
        return cls(revenue, holding_cost, ordering_cost, purchase_cost, profit)


def daily_holding_cost_per_unit(spec: ProductSpec) -> float:
    """Cost of holding one unit for one day: annual rate on unit cost, volume-adjusted."""
    return spec.holding_rate * spec.purchase_cost * spec.size / DAYS_PER_YEAR
