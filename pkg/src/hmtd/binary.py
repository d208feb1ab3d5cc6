"""Binary offloading: each task runs wholly on the UAV or wholly through the
MES, chosen with probability mu. The expected cost is affine in mu, so the
constrained optimum sits on an endpoint of the feasible interval."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .model import (
    InfeasibleThresholdError,
    Quality,
    TaskSpec,
    UavProfile,
)


@dataclass(frozen=True)
class BinaryCostBreakdown:
    local_cost: float
    offload_cost: float
    delta: float
    C: float
    gamma_B: float
    mu_tilde: float
    mu_star: float
    expected_cost: float
    avg_error: float
    case_tag: str
    constraint_active: bool


def _local_compute(task: TaskSpec, uav: UavProfile) -> float:
    return (uav.theta * task.c / uav.f_l
            + (1.0 - uav.theta) * uav.kappa * uav.f_l ** 2 * task.c)


def comm_weight(task: TaskSpec, uav: UavProfile, rate: float, f_i: float) -> float:
    """Per-unit-gamma weighted cost of shipping the features and waiting on the MES."""
    th = uav.theta
    return (task.s / rate * (th + (1.0 - th) * uav.P_t)
            + task.c / f_i * (th + (1.0 - th) * uav.P_I))


def local_cost_binary(task: TaskSpec, uav: UavProfile, q: Quality) -> float:
    r = q.rates()
    return _local_compute(task, uav) + r.local * uav.penalty


def offload_cost_binary(task: TaskSpec, uav: UavProfile, q: Quality,
                        rate: float, f_i: float) -> float:
    # the lower layers still run on the UAV before the features leave it
    r = q.rates()
    return (_local_compute(task, uav) + r.offload * uav.penalty
            + task.gamma * comm_weight(task, uav, rate, f_i))


def delta_cost(task: TaskSpec, uav: UavProfile, q: Quality,
               rate: float, f_i: float) -> Tuple[float, float, float]:
    """Return (offload minus local cost, C, gamma_B)."""
    r = q.rates()
    C = comm_weight(task, uav, rate, f_i)
    saving = r.gap * uav.penalty
    return task.gamma * C - saving, C, saving / C


def mu_feasibility_bound(q: Quality) -> float:
    r = q.rates()
    if not r.offload <= r.threshold <= r.local:
        raise InfeasibleThresholdError(
            f"eps_T={r.threshold:.6g} outside [{r.offload:.6g}, {r.local:.6g}]")
    if r.gap == 0.0:
        # offloading cannot change the error; the constraint is slack
        return 0.0
    return (r.local - r.threshold) / r.gap


def average_error(q: Quality, mu: float) -> float:
    r = q.rates()
    return r.local - mu * r.gap


def expected_delay(task: TaskSpec, uav: UavProfile, q: Quality,
                   rate: float, f_i: float, mu: float) -> float:
    r = q.rates()
    local = task.c / uav.f_l + uav.rho * r.local
    offload = (task.c / uav.f_l + task.gamma * (task.s / rate + task.c / f_i)
               + uav.rho * r.offload)
    return (1.0 - mu) * local + mu * offload


def optimal_mu(task: TaskSpec, uav: UavProfile, q: Quality,
               rate: float, f_i: float) -> BinaryCostBreakdown:
    """Cost-minimising offloading probability under the error constraint.

    Below the gamma threshold offloading is strictly cheaper, so mu* = 1.
    At or above it the smallest feasible probability wins; at exact equality
    the cost is flat in mu and the least offloading is preferred.
    """
    mu_t = mu_feasibility_bound(q)
    O_l = local_cost_binary(task, uav, q)
    O_o = offload_cost_binary(task, uav, q, rate, f_i)
    delta, C, gamma_B = delta_cost(task, uav, q, rate, f_i)
    if task.gamma < gamma_B:
        mu, tag = 1.0, "full"
    else:
        mu, tag = mu_t, "threshold"
    return BinaryCostBreakdown(
        local_cost=O_l, offload_cost=O_o, delta=delta, C=C, gamma_B=gamma_B,
        mu_tilde=mu_t, mu_star=mu,
        expected_cost=O_l + mu * delta,
        avg_error=average_error(q, mu),
        case_tag=tag,
        constraint_active=(mu == mu_t),
    )


def binary_cost_at(task: TaskSpec, uav: UavProfile, q: Quality,
                   rate: float, f_i: float, mu: float) -> float:
    O_l = local_cost_binary(task, uav, q)
    O_o = offload_cost_binary(task, uav, q, rate, f_i)
    return (1.0 - mu) * O_l + mu * O_o


def exponential_offload_probability(eps_T: float) -> float:
    """Exponential-tail model of the offloading probability, exp(-eps_T).

    Descriptive only; the optimizers treat mu as a free decision variable.
    """
    if eps_T < 0:
        raise ValueError("eps_T must be >= 0")
    return math.exp(-eps_T)


@dataclass(frozen=True)
class LocalOnlyResult:
    total_cost: float
    per_uav_cost: Tuple[float, ...]
    per_uav_error: Tuple[float, ...]
    violated: Tuple[bool, ...]


def local_only_cost(fleet: Iterable[Tuple[TaskSpec, UavProfile]],
                    q: Optional[Quality] = None,
                    qualities: Optional[Iterable[Quality]] = None) -> LocalOnlyResult:
    """Fleet total with every UAV pinned to mu = 0 (no usable channel).

    Pass one shared ``q`` or one quality model per UAV via ``qualities``.
    Constraint violations are reported, never raised.
    """
    pairs = list(fleet)
    qs: List[Quality] = list(qualities) if qualities is not None else [q] * len(pairs)
    if len(qs) != len(pairs) or any(x is None for x in qs):
        raise ValueError("need one quality model per UAV")
    costs, errors, bad = [], [], []
    for (task, uav), qi in zip(pairs, qs):
        r = qi.rates()
        costs.append(local_cost_binary(task, uav, qi))
        errors.append(r.local)
        bad.append(r.local > r.threshold)
    return LocalOnlyResult(math.fsum(costs), tuple(costs), tuple(errors), tuple(bad))
