"""Brute-force grid minimizers used to certify the closed-form optima.

The objectives are rebuilt here from the raw delay and energy definitions
with numpy, independently of the simplified expressions the optimizers use.
Scan order is fixed, so ties resolve to the smallest grid point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import Quality, TaskSpec, UavProfile

FEASIBILITY_SLACK = 1e-12
DEFAULT_RESOLUTION = 1e-4


@dataclass(frozen=True)
class GridSearchResult:
    best_var: Optional[float]
    best_cost: float
    feasible_count: int
    resolution: float
    slope_bound: float

    @property
    def empty(self) -> bool:
        return self.feasible_count == 0


def make_grid(resolution: float) -> np.ndarray:
    if not 0.0 < resolution <= 0.1:
        raise ValueError(f"resolution={resolution} must lie in (0, 0.1]")
    steps = int(round(1.0 / resolution))
    return np.linspace(0.0, 1.0, steps + 1)


def _argmin(grid, cost, err, threshold, resolution) -> GridSearchResult:
    feasible = err <= threshold + FEASIBILITY_SLACK
    count = int(feasible.sum())
    slope = float(np.max(np.abs(np.diff(cost)))) / resolution if cost.size > 1 else 0.0
    if count == 0:
        return GridSearchResult(None, float("inf"), 0, resolution, slope)
    masked = np.where(feasible, cost, np.inf)
    k = int(np.argmin(masked))
    return GridSearchResult(float(grid[k]), float(cost[k]), count, resolution, slope)


def binary_objective(task: TaskSpec, uav: UavProfile, q: Quality,
                     rate: float, f_i: float, mu: np.ndarray):
    """Expected cost and error of offloading with probability mu."""
    r = q.rates()
    th = uav.theta
    compute_t = task.c / uav.f_l
    compute_e = uav.kappa * uav.f_l ** 2 * task.c
    tx = task.s / rate
    mes = task.c / f_i
    tau_l = compute_t + uav.rho * r.local
    e_l = compute_e + uav.xi * r.local
    tau_o = compute_t + task.gamma * (tx + mes) + uav.rho * r.offload
    e_o = compute_e + task.gamma * (uav.P_t * tx + uav.P_I * mes) + uav.xi * r.offload
    cost_l = th * tau_l + (1 - th) * e_l
    cost_o = th * tau_o + (1 - th) * e_o
    cost = (1 - mu) * cost_l + mu * cost_o
    err = (1 - mu) * r.local + mu * r.offload
    return cost, err


def partial_objective(task: TaskSpec, uav: UavProfile, q: Quality,
                      rate: float, f_i: float, beta: np.ndarray,
                      theta: Optional[float] = None):
    """Weighted cost and error when a fraction beta is offloaded."""
    r = q.rates()
    th = uav.theta if theta is None else theta
    compute_e = uav.kappa * uav.f_l ** 2 * task.c
    tx = task.s / rate
    mes = task.c / f_i
    pen_local = (1 - beta) * uav.rho * r.local
    pen_off = beta * (task.gamma * (tx + mes) + uav.rho * r.offload)
    tau = task.c / uav.f_l + np.maximum(pen_local, pen_off)
    energy = ((1 - beta) * (compute_e + uav.xi * r.local)
              + beta * (compute_e + task.gamma * (uav.P_t * tx + uav.P_I * mes)
                        + uav.xi * r.offload))
    cost = th * tau + (1 - th) * energy
    err = (1 - beta) * r.local + beta * r.offload
    return cost, err


def grid_min_binary(task: TaskSpec, uav: UavProfile, q: Quality, rate: float,
                    f_i: float, resolution: float = DEFAULT_RESOLUTION) -> GridSearchResult:
    grid = make_grid(resolution)
    cost, err = binary_objective(task, uav, q, rate, f_i, grid)
    return _argmin(grid, cost, err, q.rates().threshold, resolution)


def grid_min_partial(task: TaskSpec, uav: UavProfile, q: Quality, rate: float,
                     f_i: float, theta: Optional[float] = None,
                     resolution: float = DEFAULT_RESOLUTION) -> GridSearchResult:
    grid = make_grid(resolution)
    cost, err = partial_objective(task, uav, q, rate, f_i, grid, theta)
    return _argmin(grid, cost, err, q.rates().threshold, resolution)
