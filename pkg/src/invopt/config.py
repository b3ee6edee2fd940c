"""Configuration and data ingestion for the CLI.

The config file is INI-style: one ``[global]`` section (seed,
replications, workers, history path) and one ``[product:<id>]`` section
per product. Demand statistics may be given explicitly or estimated from
the referenced history CSV. See the README for the full schema.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

from .domain import (
    ContinuousFixedQ,
    DemandStats,
    PeriodicFixedQ,
    PeriodicUpTo,
    Policy,
    ProductSpec,
)
from .demand import (
    Conditional,
    DemandModel,
    GatedLognormal,
    GatedNormal,
    MixtureTail,
    estimate_stats,
)
from .fixtures import read_history_csv
from .policy import ReplenishmentParams, replenishment_params

DEFAULT_SAFETY_FACTOR = 1.645
DEFAULT_REVIEW_PERIOD = 7

SPEC_FIELDS = (
    "purchase_cost",
    "selling_price",
    "ordering_cost",
    "holding_rate",
    "size",
    "lead_time",
    "starting_stock",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ProductConfig:
    spec: ProductSpec
    stats: DemandStats
    model: DemandModel
    safety_factor: float
    review_period: int
    order_quantity: int
    reorder_point: int
    params: ReplenishmentParams


@dataclass(frozen=True)
class RunConfig:
    products: dict[str, ProductConfig]
    seed: int
    replications: int
    workers: int | str


def annual_demand(stats: DemandStats) -> float:
    return 365.0 * stats.demand_probability * stats.mean_daily


def build_model(stats: DemandStats, name: str, tail_weight: float, tail_shift: float) -> DemandModel:
    if name == "lognormal":
        return GatedLognormal(stats)
    if name == "normal":
        return GatedNormal(stats)
    if name == "mixture":
        return MixtureTail(stats, tail_weight=tail_weight, tail_shift=tail_shift)
    raise ConfigError(f"unknown demand model: {name}")


def build_policy(name: str, product: ProductConfig) -> Policy:
    if name == "periodic":
        return PeriodicFixedQ(product.review_period, product.order_quantity)
    if name == "periodic-up-to":
        return PeriodicUpTo(product.review_period, product.safety_factor)
    if name == "continuous":
        return ContinuousFixedQ(product.reorder_point, product.order_quantity)
    raise ConfigError(f"unknown policy: {name}")


def wrap_conditional(model: DemandModel) -> DemandModel:
    return model if isinstance(model, Conditional) else Conditional(model)


def _get(section, key, cast, default=None):
    if key not in section:
        if default is not None:
            return default
        raise ConfigError(f"missing key {key!r} in section [{section.name}]")
    try:
        return cast(section[key])
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {section[key]!r}") from None


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"cannot read config file {path}")

    glob = parser["global"] if parser.has_section("global") else {}
    seed = int(glob.get("seed", 0))
    replications = int(glob.get("replications", 1000))
    workers_raw = glob.get("workers", "1")
    workers: int | str = "auto" if workers_raw == "auto" else int(workers_raw)

    history = None
    if "history" in glob:
        history_path = Path(glob["history"])
        if not history_path.is_absolute():
            history_path = path.parent / history_path
        history = read_history_csv(history_path)

    products: dict[str, ProductConfig] = {}
    for section_name in parser.sections():
        if not section_name.startswith("product:"):
            continue
        pid = section_name.split(":", 1)[1]
        section = parser[section_name]
        try:
            spec = ProductSpec(
                id=pid,
                purchase_cost=_get(section, "purchase_cost", float),
                selling_price=_get(section, "selling_price", float),
                ordering_cost=_get(section, "ordering_cost", float),
                holding_rate=_get(section, "holding_rate", float),
                size=_get(section, "size", float),
                lead_time=_get(section, "lead_time", int),
                starting_stock=_get(section, "starting_stock", int),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

        if "mean_daily" in section:
            stats = DemandStats(
                mean_daily=_get(section, "mean_daily", float),
                std_daily=_get(section, "std_daily", float),
                demand_probability=_get(section, "demand_probability", float),
                n_observations=_get(section, "n_observations", int, default=0),
            )
        else:
            if history is None or pid not in history:
                raise ConfigError(
                    f"product {pid}: no explicit stats and no history column"
                )
            stats = estimate_stats(history[pid])

        model = build_model(
            stats,
            section.get("demand_model", "lognormal"),
            tail_weight=_get(section, "tail_weight", float, default=0.1),
            tail_shift=_get(section, "tail_shift", float, default=3.0),
        )
        z = _get(section, "safety_factor", float, default=DEFAULT_SAFETY_FACTOR)
        review_period = _get(section, "review_period", int, default=DEFAULT_REVIEW_PERIOD)
        params = replenishment_params(stats, z, spec.lead_time, review_period)
        default_q = max(1, math.ceil(annual_demand(stats) / 12)) if annual_demand(stats) > 0 else 0
        order_quantity = _get(section, "order_quantity", int, default=default_q)
        reorder_pt = _get(section, "reorder_point", int, default=params.reorder_point)

        products[pid] = ProductConfig(
            spec=spec,
            stats=stats,
            model=model,
            safety_factor=z,
            review_period=review_period,
            order_quantity=order_quantity,
            reorder_point=reorder_pt,
            params=params,
        )

    if not products:
        raise ConfigError("config defines no [product:<id>] sections")
    return RunConfig(
        products=products, seed=seed, replications=replications, workers=workers
    )


def default_bounds(product: ProductConfig) -> tuple[tuple[int, int], tuple[int, int]]:
    """Search bounds anchored on the policy math when none are configured."""
    rop = max(1, product.params.reorder_point)
    monthly = max(1.0, annual_demand(product.stats) / 12.0)
    r_bounds = (max(0, math.floor(0.5 * rop)), math.ceil(2.0 * rop))
    q_bounds = (max(1, math.floor(0.25 * monthly)), math.ceil(2.0 * monthly))
    return r_bounds, q_bounds
