import json
import os
from pathlib import Path

import pytest

from invopt.cli import main

CONFIG_ONE = """\
[global]
seed = 9
replications = 5
workers = 1

[product:A]
purchase_cost = 5.0
selling_price = 9.0
ordering_cost = 80.0
holding_rate = 0.2
size = 0.5
lead_time = 4
starting_stock = 200
demand_probability = 0.9
mean_daily = 20.0
std_daily = 6.0
reorder_point = 120
order_quantity = 150
"""


def run_cli(args):
    try:
        return main(list(args))
    except SystemExit as exc:
        return exc.code


@pytest.fixture()
def one_product_config(tmp_path):
    path = tmp_path / "config.ini"
    path.write_text(CONFIG_ONE)
    return path


class TestEstimate:
    def test_reports_case_study_stats(self, tmp_path, case_history):
        from invopt.fixtures import write_history_csv

        history_path = tmp_path / "history.csv"
        write_history_csv(history_path, case_history)
        out = tmp_path / "stats.json"
        code = run_cli(["estimate", str(history_path), "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["Pr2"]["demand_probability"] == pytest.approx(1.0)
        assert report["Pr2"]["mean_daily"] == pytest.approx(648.55, rel=0.01)
        assert report["Pr4"]["demand_probability"] == pytest.approx(0.23, abs=0.01)

    def test_empty_file_is_data_error(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        assert run_cli(["estimate", str(path)]) == 2

    def test_negative_demand_is_data_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("day,A\n1,5\n2,-3\n")
        assert run_cli(["estimate", str(path)]) == 2

    def test_missing_file_is_usage_error(self, tmp_path):
        assert run_cli(["estimate", str(tmp_path / "nope.csv")]) == 1


class TestSimulate:
    def test_byte_identical_reruns(self, one_product_config, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            code = run_cli([
                "simulate", str(one_product_config), "--seed", "7",
                "--replications", "5", "--out", str(out),
            ])
            assert code == 0
        assert (out_a / "summary.json").read_bytes() == (out_b / "summary.json").read_bytes()

    def test_worker_invariance(self, one_product_config, tmp_path):
        out_a, out_b = tmp_path / "w1", tmp_path / "w2"
        run_cli(["simulate", str(one_product_config), "--seed", "7",
                 "--replications", "6", "--workers", "1", "--out", str(out_a)])
        run_cli(["simulate", str(one_product_config), "--seed", "7",
                 "--replications", "6", "--workers", "2", "--out", str(out_b)])
        assert (out_a / "summary.json").read_bytes() == (out_b / "summary.json").read_bytes()

    def test_unknown_policy_is_usage_error(self, one_product_config):
        assert run_cli(["simulate", str(one_product_config), "--policy", "magic"]) == 1

    def test_trace_export(self, one_product_config, tmp_path):
        out = tmp_path / "t"
        run_cli(["simulate", str(one_product_config), "--replications", "1",
                 "--trace", "--out", str(out)])
        lines = (out / "trace_A.csv").read_text().splitlines()
        assert lines[0] == "day,demand,sold,lost,end_inventory,order_placed,arrival"
        assert len(lines) == 366

    def test_env_seed_fallback(self, one_product_config, tmp_path, monkeypatch):
        out_env, out_flag = tmp_path / "env", tmp_path / "flag"
        monkeypatch.setenv("INVENTORY_SEED", "33")
        run_cli(["simulate", str(one_product_config), "--replications", "5",
                 "--out", str(out_env)])
        monkeypatch.delenv("INVENTORY_SEED")
        run_cli(["simulate", str(one_product_config), "--seed", "33",
                 "--replications", "5", "--out", str(out_flag)])
        assert (out_env / "summary.json").read_bytes() == (out_flag / "summary.json").read_bytes()

    def test_conditional_sampling_runs(self, one_product_config, tmp_path):
        out = tmp_path / "cond"
        code = run_cli(["simulate", str(one_product_config), "--sampling", "conditional",
                        "--replications", "5", "--out", str(out)])
        assert code == 0
        payload = json.loads((out / "summary.json").read_text())
        assert payload["sampling"] == "conditional"


class TestOptimize:
    def test_grid_single_point_bounds(self, one_product_config, tmp_path):
        out = tmp_path / "g"
        run_cli(["optimize", str(one_product_config), "--method", "grid",
                 "--bounds", "120:120:150:150", "--replications", "3",
                 "--no-plot", "--out", str(out)])
        payload = json.loads((out / "optimization.json").read_text())
        assert payload["products"]["A"]["best_r"] == 120
        assert payload["products"]["A"]["best_q"] == 150

    def test_quadratic_objective_recovers_center(self, one_product_config, tmp_path):
        out = tmp_path / "q"
        run_cli(["optimize", str(one_product_config), "--method", "grid",
                 "--objective", "quadratic", "--bounds", "400:600:3100:3300",
                 "--step", "10", "--no-plot", "--out", str(out)])
        payload = json.loads((out / "optimization.json").read_text())
        assert payload["products"]["A"]["best_r"] == 500
        assert payload["products"]["A"]["best_q"] == 3200

    def test_bayes_deterministic(self, one_product_config, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            run_cli(["optimize", str(one_product_config), "--method", "bayes",
                     "--objective", "quadratic", "--bounds", "0:60:0:60",
                     "--budget", "12", "--init", "5", "--seed", "11",
                     "--no-plot", "--out", str(out)])
        assert (out_a / "optimization.json").read_bytes() == (out_b / "optimization.json").read_bytes()
        assert (out_a / "history_A.csv").read_bytes() == (out_b / "history_A.csv").read_bytes()

    def test_inverted_bounds_is_data_error(self, one_product_config):
        assert run_cli(["optimize", str(one_product_config),
                        "--bounds", "10:5:0:1", "--no-plot"]) == 2

    def test_history_csv_header(self, one_product_config, tmp_path):
        out = tmp_path / "h"
        run_cli(["optimize", str(one_product_config), "--method", "grid",
                 "--objective", "quadratic", "--bounds", "0:10:0:10",
                 "--step", "10", "--no-plot", "--out", str(out)])
        lines = (out / "history_A.csv").read_text().splitlines()
        assert lines[0] == "r,q,mean_profit,std_profit,mean_lost_fraction"


class TestSurface:
    def test_three_by_three_lattice(self, one_product_config, tmp_path):
        out = tmp_path / "s"
        run_cli(["surface", str(one_product_config), "--bounds", "100:120:140:160",
                 "--step", "10", "--replications", "2", "--no-plot", "--out", str(out)])
        lines = (out / "surface_A.csv").read_text().splitlines()
        assert lines[0] == "r,q,mean_profit,std_profit"
        assert len(lines) == 10

    def test_matches_simulate_at_same_point(self, one_product_config, tmp_path):
        out = tmp_path / "s2"
        run_cli(["surface", str(one_product_config), "--bounds", "120:120:150:150",
                 "--seed", "9", "--replications", "4", "--no-plot", "--out", str(out)])
        surface_row = (out / "surface_A.csv").read_text().splitlines()[1].split(",")
        sim_out = tmp_path / "sim"
        run_cli(["simulate", str(one_product_config), "--seed", "9",
                 "--replications", "4", "--out", str(sim_out)])
        payload = json.loads((sim_out / "summary.json").read_text())
        assert float(surface_row[2]) == payload["products"]["A"]["mean_profit"]

    def test_renders_figure(self, one_product_config, tmp_path):
        out = tmp_path / "fig"
        run_cli(["surface", str(one_product_config), "--bounds", "100:140:130:170",
                 "--step", "20", "--replications", "2", "--out", str(out)])
        assert (out / "surface_A.png").exists()


class TestDiagnose:
    def test_series_files_and_shapes(self, one_product_config, tmp_path):
        out = tmp_path / "d"
        run_cli(["diagnose", str(one_product_config), "--replications", "120",
                 "--no-plot", "--out", str(out)])
        running = (out / "running_mean_A.csv").read_text().splitlines()
        assert len(running) == 121
        acf = (out / "autocorrelation_A.csv").read_text().splitlines()
        assert len(acf) == 31  # min(50, 120 // 4) lags
        payload = json.loads((out / "diagnosis.json").read_text())
        assert "converged" in payload["products"]["A"]

    def test_too_few_replications_is_data_error(self, one_product_config, tmp_path):
        assert run_cli(["diagnose", str(one_product_config), "--replications", "50",
                        "--no-plot", "--out", str(tmp_path / "x")]) == 2

    def test_renders_figure(self, one_product_config, tmp_path):
        out = tmp_path / "dfig"
        run_cli(["diagnose", str(one_product_config), "--replications", "100",
                 "--out", str(out)])
        assert (out / "convergence_A.png").exists()


class TestDemoData:
    def test_generates_runnable_bundle(self, tmp_path):
        out = tmp_path / "demo"
        run_cli(["demo-data", "--seed", "4", "--out", str(out)])
        assert (out / "history.csv").exists()
        sim_out = tmp_path / "demo_run"
        code = run_cli(["simulate", str(out / "config.ini"), "--replications", "2",
                        "--out", str(sim_out)])
        assert code == 0
        payload = json.loads((sim_out / "summary.json").read_text())
        assert set(payload["products"]) == {"Pr1", "Pr2", "Pr3", "Pr4"}


class TestConfigRoundTrip:
    def test_explicit_stats_match_history_path(self, tmp_path, case_history):
        # stats estimated from history vs the same stats pasted explicitly
        from invopt.demand import estimate_stats
        from invopt.fixtures import CASE_STUDY_SPECS, write_history_csv

        history_path = tmp_path / "history.csv"
        write_history_csv(history_path, {"Pr1": case_history["Pr1"]})
        spec = CASE_STUDY_SPECS["Pr1"]
        stats = estimate_stats(case_history["Pr1"])
        base = (
            "[global]\nseed = 3\nreplications = 4\nworkers = 1\n"
        )
        product = (
            f"[product:Pr1]\npurchase_cost = {spec.purchase_cost}\n"
            f"selling_price = {spec.selling_price}\nordering_cost = {spec.ordering_cost}\n"
            f"holding_rate = {spec.holding_rate}\nsize = {spec.size}\n"
            f"lead_time = {spec.lead_time}\nstarting_stock = {spec.starting_stock}\n"
        )
        cfg_hist = tmp_path / "hist.ini"
        cfg_hist.write_text(base + "history = history.csv\n\n" + product)
        cfg_expl = tmp_path / "expl.ini"
        cfg_expl.write_text(
            base + "\n" + product
            + f"demand_probability = {stats.demand_probability!r}\n"
            + f"mean_daily = {stats.mean_daily!r}\nstd_daily = {stats.std_daily!r}\n"
            + f"n_observations = {stats.n_observations}\n"
        )
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        run_cli(["simulate", str(cfg_hist), "--out", str(out_a)])
        run_cli(["simulate", str(cfg_expl), "--out", str(out_b)])
        assert (out_a / "summary.json").read_bytes() == (out_b / "summary.json").read_bytes()
