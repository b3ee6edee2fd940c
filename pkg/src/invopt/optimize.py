"""Profit maximization over (r, Q): exhaustive grid search and GP-based
Bayesian optimization with expected improvement.

The surrogate is an exact Gaussian process with a squared-exponential
kernel (per-dimension length-scales), inputs scaled to the unit square
and values standardized. Hyperparameters are chosen by log marginal
likelihood over a small fixed grid, keeping the whole loop deterministic
for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.stats import norm

from .montecarlo import ReplicationSummary

Point = tuple[int, int]

_LENGTH_SCALES = (0.05, 0.1, 0.2, 0.5, 1.0, 2.0)
_SIGNAL_VARIANCES = (0.5, 1.0, 2.0)
_MAX_JITTER = 1e-4
_MAX_CANDIDATES = 100_000


@dataclass(frozen=True)
class SearchSpace:
    r_range: tuple[int, int]
    q_range: tuple[int, int]
    step: int = 10

    def __post_init__(self) -> None:
        if self.r_range[0] > self.r_range[1] or self.q_range[0] > self.q_range[1]:
            raise ValueError("range min must not exceed max")
        if self.step < 1:
            raise ValueError("step must be >= 1")

    def grid_points(self) -> list[Point]:
        return [
            (r, q)
            for r in range(self.r_range[0], self.r_range[1] + 1, self.step)
            for q in range(self.q_range[0], self.q_range[1] + 1, self.step)
        ]

    def contains(self, point: Point) -> bool:
        r, q = point
        return (
            self.r_range[0] <= r <= self.r_range[1]
            and self.q_range[0] <= q <= self.q_range[1]
        )


@dataclass(frozen=True)
class EvaluationRecord:
    point: Point
    summary: ReplicationSummary


@dataclass(frozen=True)
class OptimizationResult:
    best_point: Point
    best_summary: ReplicationSummary
    history: tuple[EvaluationRecord, ...]
    method: str


Objective = Callable[[int, int], "ReplicationSummary | float"]


def _as_summary(value) -> ReplicationSummary:
    if isinstance(value, ReplicationSummary):
        return value
    v = float(value)
    return ReplicationSummary(
        n=1,
        mean_profit=v,
        std_profit=0.0,
        mean_lost_fraction=0.0,
        mean_end_inventory=0.0,
        profits=(v,),
    )


def _best_record(history: Sequence[EvaluationRecord]) -> EvaluationRecord:
    # highest mean profit; ties broken by smaller Q, then smaller r
    return min(
        history,
        key=lambda rec: (-rec.summary.mean_profit, rec.point[1], rec.point[0]),
    )


def grid_search(space: SearchSpace, objective: Objective) -> OptimizationResult:
    """Evaluate every lattice point and return the best."""
    points = space.grid_points()
    if not points:
        raise ValueError("empty grid")
    history = tuple(
        EvaluationRecord(point=p, summary=_as_summary(objective(*p))) for p in points
    )
    best = _best_record(history)
    return OptimizationResult(
        best_point=best.point,
        best_summary=best.summary,
        history=history,
        method="grid",
    )


class GPSurrogate:
    """Exact GP regression posterior on scaled inputs and standardized values."""

    def __init__(
        self,
        x_raw: np.ndarray,
        y_raw: np.ndarray,
        noise_var: float,
        bounds_lo: np.ndarray,
        bounds_hi: np.ndarray,
        length_scales: np.ndarray,
        signal_var: float,
        jitter: float,
    ):
        self.x_raw = x_raw
        self.bounds_lo = bounds_lo
        self.span = np.maximum(bounds_hi - bounds_lo, 1.0)
        self.y_mean = float(np.mean(y_raw))
        y_std = float(np.std(y_raw))
        self.y_std = y_std if y_std > 0 else 1.0
        self.length_scales = length_scales
        self.signal_var = signal_var
        self.noise_var = noise_var / self.y_std**2
        self.jitter = jitter

        self.xs = (x_raw - bounds_lo) / self.span
        self.ys = (y_raw - self.y_mean) / self.y_std
        k = self._kernel(self.xs, self.xs)
        k[np.diag_indices_from(k)] += self.noise_var + jitter
        self._cho = cho_factor(k, lower=True)
        self.alpha = cho_solve(self._cho, self.ys)
        self.log_marginal_likelihood = float(
            -0.5 * self.ys @ self.alpha
            - np.sum(np.log(np.diag(self._cho[0])))
            - 0.5 * len(self.ys) * np.log(2 * np.pi)
        )

    def _kernel(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        d = (a[:, None, :] - b[None, :, :]) / self.length_scales
        return self.signal_var * np.exp(-0.5 * np.sum(d**2, axis=2))

    def predict(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and std, in raw value units."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        qs = (points - self.bounds_lo) / self.span
        k_star = self._kernel(qs, self.xs)
        mean_s = k_star @ self.alpha
        v = cho_solve(self._cho, k_star.T)
        var_s = self.signal_var - np.sum(k_star * v.T, axis=1)
        var_s = np.clip(var_s, 0.0, None)
        return mean_s * self.y_std + self.y_mean, np.sqrt(var_s) * self.y_std


def gp_fit(
    points,
    values,
    noise_var: float,
    bounds: tuple[tuple[float, float], tuple[float, float]] | None = None,
) -> GPSurrogate:
    """Fit a GP, selecting hyperparameters from a fixed multi-start grid.

    ``noise_var`` is the observation noise in raw value units squared;
    ``bounds`` defines the input scaling box (defaults to the data's
    bounding box).
    """
    x = np.asarray(points, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.ndim != 2 or len(x) < 2:
        raise ValueError("need at least two points")
    if len(np.unique(x, axis=0)) < 2:
        raise ValueError("need at least two distinct points")
    if bounds is None:
        lo, hi = x.min(axis=0), x.max(axis=0)
    else:
        lo = np.array([bounds[0][0], bounds[1][0]], dtype=float)
        hi = np.array([bounds[0][1], bounds[1][1]], dtype=float)

    best: GPSurrogate | None = None
    for ls_r in _LENGTH_SCALES:
        for ls_q in _LENGTH_SCALES:
            for sv in _SIGNAL_VARIANCES:
                surrogate = _try_fit(
                    x, y, noise_var, lo, hi, np.array([ls_r, ls_q]), sv
                )
                if surrogate is not None and (
                    best is None
                    or surrogate.log_marginal_likelihood > best.log_marginal_likelihood
                ):
                    best = surrogate
    if best is None:
        raise ValueError("kernel matrix singular beyond maximum jitter")
    return best


def _try_fit(x, y, noise_var, lo, hi, length_scales, signal_var) -> GPSurrogate | None:
    jitter = 1e-10
    while jitter <= _MAX_JITTER:
        try:
            return GPSurrogate(x, y, noise_var, lo, hi, length_scales, signal_var, jitter)
        except np.linalg.LinAlgError:
            jitter *= 10
    return None


def expected_improvement(
    surrogate: GPSurrogate, points, best_so_far: float, xi: float = 0.01
) -> np.ndarray:
    """EI at candidate points, maximization convention; xi is in standardized units."""
    if xi < 0:
        raise ValueError("xi must be >= 0")
    mean, std = surrogate.predict(points)
    margin = mean - best_so_far - xi * surrogate.y_std
    ei = np.where(margin > 0, margin, 0.0)
    positive = std > 0
    if np.any(positive):
        u = margin[positive] / std[positive]
        ei[positive] = margin[positive] * norm.cdf(u) + std[positive] * norm.pdf(u)
    return ei


def _candidate_lattice(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    rs = np.arange(space.r_range[0], space.r_range[1] + 1)
    qs = np.arange(space.q_range[0], space.q_range[1] + 1)
    total = len(rs) * len(qs)
    if total <= _MAX_CANDIDATES:
        grid = np.array([(r, q) for r in rs for q in qs], dtype=int)
    else:
        idx = rng.choice(total, size=_MAX_CANDIDATES, replace=False)
        idx.sort()
        grid = np.column_stack((rs[idx // len(qs)], qs[idx % len(qs)]))
    return grid


def _latin_hypercube(space: SearchSpace, count: int, rng: np.random.Generator) -> list[Point]:
    points = []
    axes = []
    for lo, hi in (space.r_range, space.q_range):
        strata = lo + (hi - lo) * (rng.permutation(count) + rng.random(count)) / count
        axes.append(np.clip(np.rint(strata).astype(int), lo, hi))
    for r, q in zip(*axes):
        points.append((int(r), int(q)))
    return points


def _nearest_unevaluated(point: Point, space: SearchSpace, seen: set[Point]) -> Point | None:
    # expanding Chebyshev rings around the requested point
    max_radius = max(
        space.r_range[1] - space.r_range[0], space.q_range[1] - space.q_range[0]
    )
    for radius in range(1, max_radius + 1):
        ring = []
        for dr in range(-radius, radius + 1):
            for dq in range(-radius, radius + 1):
                if max(abs(dr), abs(dq)) != radius:
                    continue
                cand = (point[0] + dr, point[1] + dq)
                if space.contains(cand) and cand not in seen:
                    ring.append(cand)
        if ring:
            return min(ring)
    return None


def bayesian_optimize(
    space: SearchSpace,
    objective: Objective,
    budget: int = 40,
    init_count: int = 10,
    seed: int = 0,
    xi: float = 0.01,
) -> OptimizationResult:
    """Latin-hypercube initialization followed by EI-guided GP rounds.

    Deterministic for a fixed seed; never re-evaluates a point (duplicates
    are moved to the nearest unevaluated lattice point).
    """
    if init_count < 2:
        raise ValueError("init_count must be >= 2")
    if budget < init_count:
        raise ValueError("budget must be >= init_count")

    rng = np.random.default_rng(seed)
    candidates = _candidate_lattice(space, rng)
    history: list[EvaluationRecord] = []
    seen: set[Point] = set()

    def evaluate(point: Point) -> None:
        summary = _as_summary(objective(*point))
        history.append(EvaluationRecord(point=point, summary=summary))
        seen.add(point)

    for point in _latin_hypercube(space, init_count, rng):
        if point in seen:
            moved = _nearest_unevaluated(point, space, seen)
            if moved is None:
                continue
            point = moved
        evaluate(point)

    while len(history) < budget:
        mask = np.array([(int(r), int(q)) not in seen for r, q in candidates])
        if not mask.any():
            break
        open_candidates = candidates[mask]
        x = np.array([rec.point for rec in history], dtype=float)
        y = np.array([rec.summary.mean_profit for rec in history])
        noise = float(
            np.mean(
                [
                    (rec.summary.std_profit / np.sqrt(rec.summary.n)) ** 2
                    for rec in history
                ]
            )
        )
        surrogate = gp_fit(
            x, y, max(noise, 1e-12), bounds=(space.r_range, space.q_range)
        )
        best_value = max(rec.summary.mean_profit for rec in history)
        ei = expected_improvement(surrogate, open_candidates, best_value, xi=xi)
        next_point = tuple(int(v) for v in open_candidates[int(np.argmax(ei))])
        evaluate(next_point)

    best = _best_record(history)
    return OptimizationResult(
        best_point=best.point,
        best_summary=best.summary,
        history=tuple(history),
        method="bayesian",
    )
