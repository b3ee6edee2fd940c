"""Command-line interface.

Subcommands cover the end-to-end workflow: ``estimate`` demand statistics
from history, ``simulate`` a policy over many replications, ``optimize``
(r, Q) by grid search or Bayesian optimization, ``surface`` a profit
lattice, ``diagnose`` convergence, and ``demo-data`` to generate the
bundled case-study fixtures.

Exit codes: 0 success, 1 usage error, 2 data or validation error.
"""

from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from .config import (
    ConfigError,
    ProductConfig,
    RunConfig,
    annual_demand,
    build_policy,
    default_bounds,
    load_config,
)
from .diagnostics import assess_convergence
from .domain import ContinuousFixedQ
from .demand import estimate_stats, generate_stream
from .engine import simulate_year, trace_rows
from .fixtures import (
    CASE_STUDY_SPECS,
    make_case_study_history,
    read_history_csv,
    write_history_csv,
)
from .montecarlo import ReplicationPlan, evaluate_policy, replication_seed
from .optimize import SearchSpace, bayesian_optimize, grid_search

POLICY_NAMES = ("periodic", "periodic-up-to", "continuous")


def _money(x: float) -> float:
    return round(float(x), 2)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _summary_payload(summary) -> dict:
    return {
        "n": summary.n,
        "mean_profit": _money(summary.mean_profit),
        "std_profit": _money(summary.std_profit),
        "mean_lost_fraction": round(summary.mean_lost_fraction, 6),
        "mean_end_inventory": round(summary.mean_end_inventory, 2),
    }


def _plan(cfg: RunConfig, seed: int | None, replications: int | None,
          workers: int | str | None) -> ReplicationPlan:
    return ReplicationPlan(
        n_replications=replications if replications is not None else cfg.replications,
        base_seed=seed if seed is not None else cfg.seed,
        crn=True,
        workers=workers if workers is not None else cfg.workers,
    )


def _parse_bounds(text: str | None) -> tuple[tuple[int, int], tuple[int, int]] | None:
    if text is None:
        return None
    parts = text.split(":")
    if len(parts) != 4:
        raise click.UsageError("bounds must be rmin:rmax:qmin:qmax")
    try:
        r_lo, r_hi, q_lo, q_hi = (int(p) for p in parts)
    except ValueError:
        raise click.UsageError("bounds must be integers") from None
    if r_lo > r_hi or q_lo > q_hi:
        raise ConfigError("inverted bounds")
    return (r_lo, r_hi), (q_lo, q_hi)


def _product_bounds(product: ProductConfig, explicit) -> tuple[tuple[int, int], tuple[int, int]]:
    return explicit if explicit is not None else default_bounds(product)


def _simulation_objective(product: ProductConfig, plan: ReplicationPlan):
    def objective(r: int, q: int):
        policy = ContinuousFixedQ(reorder_point=r, order_quantity=q)
        return evaluate_policy(
            product.spec, policy, product.model, product.params, plan
        )

    return objective


def _quadratic_objective(bounds):
    (r_lo, r_hi), (q_lo, q_hi) = bounds
    r_mid = (r_lo + r_hi) / 2.0
    q_mid = (q_lo + q_hi) / 2.0

    def objective(r: int, q: int) -> float:
        return -((r - r_mid) ** 2) - (q - q_mid) ** 2

    return objective


@click.group()
def cli() -> None:
    """Monte Carlo simulation and optimization of inventory policies."""


@cli.command("estimate")
@click.argument("history_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the stats report JSON here instead of stdout.")
def cmd_estimate(history_csv: str, out: str | None) -> None:
    """Estimate demand statistics from a demand-history CSV."""
    history = read_history_csv(history_csv)
    report = {}
    for pid, column in history.items():
        stats = estimate_stats(column)
        report[pid] = {
            "demand_probability": round(stats.demand_probability, 4),
            "mean_daily": round(stats.mean_daily, 2),
            "std_daily": round(stats.std_daily, 2),
            "n_observations": stats.n_observations,
            "annual_demand": round(annual_demand(stats), 1),
        }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@cli.command("simulate")
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--policy", type=click.Choice(POLICY_NAMES), default="continuous")
@click.option("--sampling", type=click.Choice(["random", "conditional"]), default="random")
@click.option("--seed", type=int, default=None, envvar="INVENTORY_SEED")
@click.option("--replications", type=int, default=None)
@click.option("--workers", type=str, default=None)
@click.option("--trace", is_flag=True, help="Export a one-replication daily trace per product.")
@click.option("--out", type=click.Path(file_okay=False), default="out")
def cmd_simulate(config_file, policy, sampling, seed, replications, workers, trace, out):
    """Evaluate one policy per product and write a summary JSON."""
    cfg = load_config(config_file)
    plan = _plan(cfg, seed, replications, _parse_workers(workers))
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    payload: dict = {"policy": policy, "sampling": sampling, "products": {}}
    total = 0.0
    for pid, product in cfg.products.items():
        pol = build_policy(policy, product)
        summary = evaluate_policy(
            product.spec, pol, product.model, product.params, plan, sampling=sampling
        )
        payload["products"][pid] = _summary_payload(summary)
        total += summary.mean_profit
        if trace:
            stream = generate_stream(product.model, replication_seed(plan.base_seed, 0))
            result = simulate_year(product.spec, pol, stream, product.params)
            _write_csv(
                out_dir / f"trace_{pid}.csv",
                ["day", "demand", "sold", "lost", "end_inventory", "order_placed", "arrival"],
                [list(row.values()) for row in trace_rows(result)],
            )
    payload["total_mean_profit"] = _money(total)
    _write_json(out_dir / "summary.json", payload)
    elapsed = time.perf_counter() - started
    click.echo(f"simulate ({sampling}): {elapsed:.2f}s, total mean profit {_money(total)}", err=True)
    click.echo(str(out_dir / "summary.json"))


def _parse_workers(workers: str | None) -> int | str | None:
    if workers is None:
        return None
    return "auto" if workers == "auto" else int(workers)


@cli.command("optimize")
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["grid", "bayes"]), default="grid")
@click.option("--step", type=int, default=10, help="Grid step in units.")
@click.option("--budget", type=int, default=40, help="Evaluation budget (bayes).")
@click.option("--init", "init_count", type=int, default=10, help="Initial samples (bayes).")
@click.option("--bounds", type=str, default=None, help="rmin:rmax:qmin:qmax for all products.")
@click.option("--objective", type=click.Choice(["simulation", "quadratic"]),
              default="simulation",
              help="'quadratic' is a deterministic test objective centered on the bounds.")
@click.option("--seed", type=int, default=None, envvar="INVENTORY_SEED")
@click.option("--replications", type=int, default=None)
@click.option("--workers", type=str, default=None)
@click.option("--plot/--no-plot", default=True)
@click.option("--out", type=click.Path(file_okay=False), default="out")
def cmd_optimize(config_file, method, step, budget, init_count, bounds, objective,
                 seed, replications, workers, plot, out):
    """Search (r, Q) for maximal mean profit, per product."""
    cfg = load_config(config_file)
    plan = _plan(cfg, seed, replications, _parse_workers(workers))
    explicit_bounds = _parse_bounds(bounds)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    payload: dict = {"method": method, "products": {}}
    total = 0.0
    for pid, product in cfg.products.items():
        prod_bounds = _product_bounds(product, explicit_bounds)
        space = SearchSpace(r_range=prod_bounds[0], q_range=prod_bounds[1], step=step)
        if objective == "quadratic":
            fn = _quadratic_objective(prod_bounds)
        else:
            fn = _simulation_objective(product, plan)
        if method == "grid":
            result = grid_search(space, fn)
        else:
            result = bayesian_optimize(
                space, fn, budget=budget, init_count=init_count, seed=plan.base_seed
            )
        payload["products"][pid] = {
            "best_r": result.best_point[0],
            "best_q": result.best_point[1],
            "summary": _summary_payload(result.best_summary),
            "evaluations": len(result.history),
        }
        total += result.best_summary.mean_profit
        rows = [
            [
                rec.point[0],
                rec.point[1],
                _money(rec.summary.mean_profit),
                _money(rec.summary.std_profit),
                round(rec.summary.mean_lost_fraction, 6),
            ]
            for rec in result.history
        ]
        _write_csv(
            out_dir / f"history_{pid}.csv",
            ["r", "q", "mean_profit", "std_profit", "mean_lost_fraction"],
            rows,
        )
        if plot:
            from .plots import save_history_figure

            save_history_figure(
                [rec.point for rec in result.history],
                [rec.summary.mean_profit for rec in result.history],
                result.best_point,
                f"{pid} {method} search",
                out_dir / f"history_{pid}.png",
            )
    payload["total_mean_profit"] = _money(total)
    _write_json(out_dir / "optimization.json", payload)
    click.echo(str(out_dir / "optimization.json"))


@cli.command("surface")
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--bounds", type=str, default=None, help="rmin:rmax:qmin:qmax for all products.")
@click.option("--step", type=int, default=10)
@click.option("--seed", type=int, default=None, envvar="INVENTORY_SEED")
@click.option("--replications", type=int, default=None)
@click.option("--workers", type=str, default=None)
@click.option("--plot/--no-plot", default=True)
@click.option("--out", type=click.Path(file_okay=False), default="out")
def cmd_surface(config_file, bounds, step, seed, replications, workers, plot, out):
    """Evaluate the full (r, Q) lattice under common random numbers."""
    cfg = load_config(config_file)
    plan = _plan(cfg, seed, replications, _parse_workers(workers))
    explicit_bounds = _parse_bounds(bounds)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for pid, product in cfg.products.items():
        prod_bounds = _product_bounds(product, explicit_bounds)
        space = SearchSpace(r_range=prod_bounds[0], q_range=prod_bounds[1], step=step)
        fn = _simulation_objective(product, plan)
        points = space.grid_points()
        rows = []
        values = {}
        for r, q in points:
            summary = fn(r, q)
            rows.append([r, q, _money(summary.mean_profit), _money(summary.std_profit)])
            values[(r, q)] = summary.mean_profit
        _write_csv(
            out_dir / f"surface_{pid}.csv",
            ["r", "q", "mean_profit", "std_profit"],
            rows,
        )
        if plot:
            from .plots import save_surface_figure

            r_values = np.unique([p[0] for p in points])
            q_values = np.unique([p[1] for p in points])
            grid = np.array(
                [[values[(r, q)] for q in q_values] for r in r_values]
            )
            save_surface_figure(
                r_values, q_values, grid,
                f"{pid} expected profit",
                out_dir / f"surface_{pid}.png",
            )
        click.echo(str(out_dir / f"surface_{pid}.csv"))


@cli.command("diagnose")
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--policy", type=click.Choice(POLICY_NAMES), default="continuous")
@click.option("--seed", type=int, default=None, envvar="INVENTORY_SEED")
@click.option("--replications", type=int, default=None)
@click.option("--workers", type=str, default=None)
@click.option("--plot/--no-plot", default=True)
@click.option("--out", type=click.Path(file_okay=False), default="out")
def cmd_diagnose(config_file, policy, seed, replications, workers, plot, out):
    """Convergence diagnostics of the replication profit series."""
    cfg = load_config(config_file)
    plan = _plan(cfg, seed, replications, _parse_workers(workers))
    if plan.n_replications < 100:
        raise ConfigError("diagnosis needs at least 100 replications")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    verdicts = {}
    for pid, product in cfg.products.items():
        pol = build_policy(policy, product)
        summary = evaluate_policy(
            product.spec, pol, product.model, product.params, plan
        )
        report = assess_convergence(np.array(summary.profits))
        _write_csv(out_dir / f"running_mean_{pid}.csv", ["index", "running_mean"],
                   list(enumerate(report.running_mean, start=1)))
        _write_csv(out_dir / f"batch_means_{pid}.csv", ["batch", "mean"],
                   list(enumerate(report.batch_means, start=1)))
        _write_csv(out_dir / f"standard_error_{pid}.csv", ["index", "standard_error"],
                   list(enumerate(report.standard_error, start=1)))
        _write_csv(out_dir / f"autocorrelation_{pid}.csv", ["lag", "autocorrelation"],
                   list(enumerate(report.autocorrelation, start=1)))
        verdicts[pid] = {"converged": report.converged}
        if plot:
            from .plots import save_convergence_figure

            save_convergence_figure(
                report, f"{pid} convergence", out_dir / f"convergence_{pid}.png"
            )
    _write_json(out_dir / "diagnosis.json", {"policy": policy, "products": verdicts})
    click.echo(str(out_dir / "diagnosis.json"))


@cli.command("demo-data")
@click.option("--seed", type=int, default=0, envvar="INVENTORY_SEED")
@click.option("--out", type=click.Path(file_okay=False), default="demo")
def cmd_demo_data(seed: int, out: str) -> None:
    """Generate the four-product case-study history CSV and a matching config."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    history = make_case_study_history(seed=seed)
    write_history_csv(out_dir / "history.csv", history)

    lines = [
        "[global]",
        f"seed = {seed}",
        "replications = 1000",
        "workers = 1",
        "history = history.csv",
        "",
    ]
    for pid, spec in CASE_STUDY_SPECS.items():
        lines += [
            f"[product:{pid}]",
            f"purchase_cost = {spec.purchase_cost}",
            f"selling_price = {spec.selling_price}",
            f"ordering_cost = {spec.ordering_cost}",
            f"holding_rate = {spec.holding_rate}",
            f"size = {spec.size}",
            f"lead_time = {spec.lead_time}",
            f"starting_stock = {spec.starting_stock}",
            "",
        ]
    (out_dir / "config.ini").write_text("\n".join(lines))
    click.echo(str(out_dir / "config.ini"))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except (ConfigError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    return 0


if __name__ == "__main__":
    main()
