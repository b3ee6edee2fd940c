"""Monte Carlo simulation and optimization of single-echelon inventory policies."""

from .domain import (
    ContinuousFixedQ,
    ContinuousUpTo,
    CostBreakdown,
    DemandStats,
    PeriodicFixedQ,
    PeriodicUpTo,
    Policy,
    ProductSpec,
    daily_holding_cost_per_unit,
)
from .demand import (
    Conditional,
    DemandModel,
    DemandStream,
    GatedLognormal,
    GatedNormal,
    MixtureTail,
    estimate_stats,
    generate_stream,
    lognormal_params,
    sample_day,
    sample_day_conditional,
)
from .policy import (
    LeadTimeDemand,
    ReplenishmentParams,
    lead_time_demand,
    order_up_to,
    periodic_order_quantity,
    reorder_point,
    replenishment_params,
    safety_stock,
)
from .engine import (
    DayRecord,
    PendingOrder,
    SimulationResult,
    simulate_year,
    simulate_year_conditional,
)
from .montecarlo import (
    PairedComparison,
    ReplicationPlan,
    ReplicationSummary,
    compare_policies,
    evaluate_policy,
    replication_seed,
)
from .diagnostics import (
    ConvergenceReport,
    assess_convergence,
    autocorrelation,
    batch_means,
    running_mean,
    standard_error_series,
)
from .optimize import (
    EvaluationRecord,
    GPSurrogate,
    OptimizationResult,
    SearchSpace,
    bayesian_optimize,
    expected_improvement,
    gp_fit,
    grid_search,
)

__version__ = "0.1.0"
