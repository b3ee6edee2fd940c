"""Single-year inventory simulation.

Each day runs in a fixed order: credit arriving orders, sell against
demand (unmet demand is lost, not backordered), then apply the policy's
ordering rule on inventory position (on-hand plus on-order). Orders whose
arrival would fall past the horizon still incur ordering and purchase
costs but never arrive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .domain import (
    ContinuousFixedQ,
    ContinuousUpTo,
    CostBreakdown,
    PeriodicFixedQ,
    PeriodicUpTo,
    Policy,
    ProductSpec,
    daily_holding_cost_per_unit,
)
from .demand import DemandModel, DemandStream, sample_day_conditional
from .policy import ReplenishmentParams, periodic_order_quantity
import math


@dataclass(frozen=True)
class PendingOrder:
    placed_day: int
    arrival_day: int
    quantity: int

    def __post_init__(self) -> None:
        if self.quantity <= 0:
            raise ValueError("pending order quantity must be > 0")
        if self.arrival_day < self.placed_day:
            raise ValueError("arrival cannot precede placement")


@dataclass(frozen=True)
class DayRecord:
    day: int
    demand: int
    sold: int
    lost: int
    end_inventory: int
    order_placed: int | None = None
    arrival: int | None = None


@dataclass(frozen=True)
class SimulationResult:
    trace: tuple[DayRecord, ...]
    costs: CostBreakdown
    orders_placed: int
    total_demand: int
    total_sold: int
    total_lost: int
    mean_end_inventory: float


# demand_fn(day, order_triggered_previous_day, previous_demand) -> units
DemandFn = Callable[[int, bool, int], int]


def _order_decision(
    policy: Policy,
    params: ReplenishmentParams | None,
    day: int,
    position: int,
    outstanding: bool,
) -> int:
    if isinstance(policy, PeriodicFixedQ):
        if day % policy.review_period == 0:
            return policy.order_quantity
        return 0
    if isinstance(policy, PeriodicUpTo):
        if day % policy.review_period == 0:
            if params is None:
                raise ValueError("PeriodicUpTo requires replenishment params")
            return periodic_order_quantity(params.order_up_to, position)
        return 0
    if isinstance(policy, ContinuousFixedQ):
        if position <= policy.reorder_point and not outstanding:
            return policy.order_quantity
        return 0
    if isinstance(policy, ContinuousUpTo):
        if position <= policy.reorder_point and not outstanding:
            return max(0, math.ceil(policy.order_up_to) - position)
        return 0
    raise TypeError(f"unknown policy type: {type(policy).__name__}")


def _run(
    spec: ProductSpec,
    policy: Policy,
    params: ReplenishmentParams | None,
    demand_fn: DemandFn,
    horizon: int,
    keep_trace: bool,
) -> SimulationResult:
    holding_per_unit_day = daily_holding_cost_per_unit(spec)
    on_hand = spec.starting_stock
    on_order = 0
    pending: list[PendingOrder] = []

    revenue = 0.0
    holding = 0.0
    ordering = 0.0
    purchase = 0.0
    inventory_sum = 0
    total_demand = total_sold = total_lost = 0
    orders_placed = 0
    trace: list[DayRecord] = []

    triggered_prev = False
    prev_demand = 0

    for day in range(1, horizon + 1):
        arrival = 0
        if pending:
            remaining = []
            for order in pending:
                if order.arrival_day == day:
                    arrival += order.quantity
                else:
                    remaining.append(order)
            pending = remaining
        on_hand += arrival
        on_order -= arrival

        demand = demand_fn(day, triggered_prev, prev_demand)
        sold = min(on_hand, demand)
        on_hand -= sold
        lost = demand - sold

        quantity = _order_decision(
            policy, params, day, on_hand + on_order, outstanding=bool(pending)
        )
        triggered = quantity > 0
        if triggered:
            orders_placed += 1
            ordering += spec.ordering_cost
            purchase += spec.purchase_cost * quantity
            pending.append(
                PendingOrder(day, day + spec.lead_time, quantity)
            )
            on_order += quantity

        revenue += sold * spec.selling_price
        holding += on_hand * holding_per_unit_day
        inventory_sum += on_hand
        total_demand += demand
        total_sold += sold
        total_lost += lost

        if keep_trace:
            trace.append(
                DayRecord(
                    day=day,
                    demand=demand,
                    sold=sold,
                    lost=lost,
                    end_inventory=on_hand,
                    order_placed=quantity if triggered else None,
                    arrival=arrival if arrival > 0 else None,
                )
            )

        triggered_prev = triggered
        prev_demand = demand

    costs = CostBreakdown.from_components(revenue, holding, ordering, purchase)
    return SimulationResult(
        trace=tuple(trace),
        costs=costs,
        orders_placed=orders_placed,
        total_demand=total_demand,
        total_sold=total_sold,
        total_lost=total_lost,
        mean_end_inventory=inventory_sum / horizon,
    )


def simulate_year(
    spec: ProductSpec,
    policy: Policy,
    demand: DemandStream | Sequence[int],
    params: ReplenishmentParams | None = None,
    horizon: int = 365,
    keep_trace: bool = True,
) -> SimulationResult:
    """Simulate ``horizon`` days against a pre-drawn demand stream."""
    values = demand.values if isinstance(demand, DemandStream) else tuple(demand)
    if len(values) != horizon:
        raise ValueError(
            f"demand stream length {len(values)} does not match horizon {horizon}"
        )
    return _run(
        spec,
        policy,
        params,
        lambda day, _trig, _prev: values[day - 1],
        horizon,
        keep_trace,
    )


def simulate_year_conditional(
    spec: ProductSpec,
    policy: Policy,
    model: DemandModel,
    seed: int | np.random.SeedSequence,
    params: ReplenishmentParams | None = None,
    horizon: int = 365,
    keep_trace: bool = True,
) -> SimulationResult:
    """Simulate with demand drawn on the fly, echoing demand after order triggers.

    The day after an order is placed repeats the trigger day's demand
    exactly; all other days sample from the model. With no triggers the
    result matches ``simulate_year`` on a stream generated from the same
    seed.
    """
    rng = np.random.default_rng(seed)
    return _run(
        spec,
        policy,
        params,
        lambda day, triggered, prev: sample_day_conditional(model, rng, triggered, prev),
        horizon,
        keep_trace,
    )


def trace_rows(result: SimulationResult) -> list[dict]:
    """Trace as flat dicts, for CSV export."""
    return [
        {
            "day": r.day,
            "demand": r.demand,
            "sold": r.sold,
            "lost": r.lost,
            "end_inventory": r.end_inventory,
            "order_placed": "" if r.order_placed is None else r.order_placed,
            "arrival": "" if r.arrival is None else r.arrival,
        }
        for r in result.trace
    ]
