import numpy as np
import pytest
from scipy.stats import norm

from invopt.optimize import (
    SearchSpace,
    bayesian_optimize,
    expected_improvement,
    gp_fit,
    grid_search,
)


def quadratic(center_r, center_q):
    def objective(r, q):
        return -((r - center_r) ** 2) - (q - center_q) ** 2

    return objective


class TestSearchSpace:
    def test_grid_points(self):
        space = SearchSpace((0, 20), (0, 10), step=10)
        assert space.grid_points() == [(0, 0), (0, 10), (10, 0), (10, 10), (20, 0), (20, 10)]

    def test_step_exceeding_range(self):
        space = SearchSpace((5, 8), (3, 4), step=100)
        assert space.grid_points() == [(5, 3)]

    def test_inverted_range_rejected(self):
        with pytest.raises(ValueError):
            SearchSpace((10, 5), (0, 1))


class TestGridSearch:
    def test_recovers_lattice_optimum(self):
        space = SearchSpace((400, 600), (3100, 3300), step=10)
        objective = quadratic(500, 3200)
        result = grid_search(space, objective)
        # independent brute-force oracle over all lattice points
        brute = max(space.grid_points(), key=lambda p: objective(*p))
        assert result.best_point == brute == (500, 3200)
        assert len(result.history) == 21 * 21

    def test_single_point_space(self):
        space = SearchSpace((5, 5), (7, 7))
        result = grid_search(space, quadratic(0, 0))
        assert result.best_point == (5, 7)

    def test_history_rescan_consistency(self):
        space = SearchSpace((0, 50), (0, 50), step=25)
        result = grid_search(space, quadratic(30, 20))
        rescan = max(result.history, key=lambda rec: rec.summary.mean_profit)
        assert result.best_summary.mean_profit == rescan.summary.mean_profit

    def test_tie_breaks_prefer_smaller_q_then_r(self):
        space = SearchSpace((0, 10), (0, 10), step=10)
        result = grid_search(space, lambda r, q: 1.0)
        assert result.best_point == (0, 0)

    def test_deterministic(self):
        space = SearchSpace((0, 100), (0, 100), step=50)
        a = grid_search(space, quadratic(40, 60))
        b = grid_search(space, quadratic(40, 60))
        assert a == b


class TestGPSurrogate:
    def setup_method(self):
        rng = np.random.default_rng(0)
        self.x = rng.uniform(0, 100, size=(20, 2))
        self.y = np.array([-((r - 30) ** 2) - (q - 70) ** 2 for r, q in self.x])
        self.gp = gp_fit(self.x, self.y, noise_var=1e-8, bounds=((0, 100), (0, 100)))

    def test_interpolates_training_points(self):
        mean, _ = self.gp.predict(self.x)
        scale = np.ptp(self.y)
        assert np.max(np.abs(mean - self.y)) < 0.02 * scale

    def test_variance_shrinks_at_training_points(self):
        _, std_train = self.gp.predict(self.x[:1])
        _, std_far = self.gp.predict(np.array([[250.0, 250.0]]))
        assert std_train[0] <= std_far[0]

    def test_heldout_rmse(self):
        grid = np.array([[r, q] for r in range(5, 100, 13) for q in range(5, 100, 13)], float)
        truth = np.array([-((r - 30) ** 2) - (q - 70) ** 2 for r, q in grid])
        mean, _ = self.gp.predict(grid)
        rmse = np.sqrt(np.mean((mean - truth) ** 2))
        assert rmse < 0.1 * np.ptp(truth)

    def test_needs_two_distinct_points(self):
        with pytest.raises(ValueError):
            gp_fit([[1.0, 1.0], [1.0, 1.0]], [0.0, 0.0], noise_var=0.1)

    def test_duplicate_points_with_noise_ok(self):
        x = [[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]
        y = [0.0, 1.0, 5.0]
        gp = gp_fit(x, y, noise_var=0.5)
        mean, _ = gp.predict([[0.0, 0.0]])
        assert 0.0 <= mean[0] <= 1.0


class TestExpectedImprovement:
    @staticmethod
    def make_gp():
        x = [[0.0, 0.0], [10.0, 10.0], [3.0, 7.0]]
        y = [1.0, 2.0, 1.5]
        return gp_fit(x, y, noise_var=1e-6, bounds=((0, 10), (0, 10)))

    def test_formula_at_zero_margin(self):
        # mu = f*, xi = 0, s = 2  ->  EI = 2 * phi(0)
        margin = 0.0
        s = 2.0
        ei = margin * norm.cdf(margin / s) + s * norm.pdf(margin / s)
        assert ei == pytest.approx(0.7979, abs=1e-4)

    def test_no_improvement_when_deterministic(self):
        gp = self.make_gp()
        # at a training point with tiny noise, std ~ 0 and mu <= best
        ei = expected_improvement(gp, [[0.0, 0.0]], best_so_far=10.0, xi=0.0)
        assert ei[0] == pytest.approx(0.0, abs=1e-6)

    def test_ei_nonnegative_everywhere(self):
        gp = self.make_gp()
        pts = [[r, q] for r in range(0, 11, 2) for q in range(0, 11, 2)]
        assert np.all(expected_improvement(gp, pts, best_so_far=2.0) >= 0)

    def test_ei_increases_with_uncertainty(self):
        # at mu = f* the EI reduces to s * phi(0), strictly increasing in s
        values = [s * norm.pdf(0.0) for s in (0.5, 1.0, 2.0, 4.0)]
        assert values == sorted(values)
        gp = self.make_gp()
        far = expected_improvement(gp, [[5.0, 2.0]], best_so_far=2.0, xi=0.0)
        assert far[0] > 0


class TestBayesianOptimize:
    def test_budget_validation(self):
        space = SearchSpace((0, 10), (0, 10))
        with pytest.raises(ValueError):
            bayesian_optimize(space, quadratic(5, 5), budget=3, init_count=5)

    def test_budget_equals_init(self):
        space = SearchSpace((0, 50), (0, 50))
        result = bayesian_optimize(space, quadratic(25, 25), budget=6, init_count=6, seed=1)
        assert len(result.history) == 6

    def test_deterministic_for_fixed_seed(self):
        space = SearchSpace((0, 60), (0, 60))
        a = bayesian_optimize(space, quadratic(20, 40), budget=15, init_count=5, seed=3)
        b = bayesian_optimize(space, quadratic(20, 40), budget=15, init_count=5, seed=3)
        assert a == b

    def test_finds_quadratic_optimum(self):
        space = SearchSpace((0, 100), (0, 100))
        result = bayesian_optimize(space, quadratic(30, 70), budget=40, init_count=10, seed=0)
        assert abs(result.best_point[0] - 30) <= 2
        assert abs(result.best_point[1] - 70) <= 2

    def test_monotone_objective_reaches_corner(self):
        space = SearchSpace((0, 30), (0, 30))
        result = bayesian_optimize(space, lambda r, q: r + q, budget=25, init_count=5, seed=2)
        assert result.best_point[0] >= 28 and result.best_point[1] >= 28

    def test_incumbent_improves_on_initial_sample(self):
        space = SearchSpace((0, 100), (0, 100))
        result = bayesian_optimize(space, quadratic(62, 18), budget=30, init_count=10, seed=5)
        init_best = max(rec.summary.mean_profit for rec in result.history[:10])
        assert result.best_summary.mean_profit >= init_best

    def test_no_duplicate_evaluations(self):
        space = SearchSpace((0, 20), (0, 20))
        result = bayesian_optimize(space, quadratic(10, 10), budget=30, init_count=8, seed=4)
        points = [rec.point for rec in result.history]
        assert len(points) == len(set(points))

    def test_beats_coarse_grid(self):
        space = SearchSpace((0, 100), (0, 100), step=10)
        objective = quadratic(33, 67)
        coarse = grid_search(space, objective)
        bo = bayesian_optimize(space, objective, budget=40, init_count=10, seed=0)
        assert bo.best_summary.mean_profit >= coarse.best_summary.mean_profit
