"""Partial offloading: a fraction beta of each task's data goes through the
MES, the rest stays on the UAV.

The per-UAV cost is piecewise affine in beta with one kink at the ratio where
the local penalty branch of the delay meets the offload branch. Which side
of the kink (or which end of [beta_tilde, 1]) is optimal depends only on
where gamma falls relative to two thresholds.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Tuple

from .binary import mu_feasibility_bound
from .model import (
    EffectiveRates,
    InfeasibleConfigurationError,
    InfeasibleThresholdError,
    Quality,
    QualityErrorModel,
    TaskSpec,
    UavProfile,
)

FULL = "full"
BALANCED = "balanced"
THRESHOLD = "threshold"


class PartialComponents(NamedTuple):
    tau_l: float
    energy_l: float
    tau_o: float
    energy_o: float
    delta_p: float
    delta_op: float


@dataclass(frozen=True)
class PartialCostBreakdown:
    delta_p: float
    delta_op: float
    total_delay: float
    energy: float
    weighted_cost: float
    beta_hat: float
    beta_tilde: float
    gamma_T1: Optional[float]
    gamma_T2: Optional[float]
    gamma_T_energy: Optional[float]
    beta_star: float
    case_tag: str
    avg_error: float
    threshold: float
    constraint_active: bool
    # populated by optimal_beta_special only: the beta = eta operating point
    split_beta: Optional[float] = None
    split_cost: Optional[float] = None
    split_error: Optional[float] = None


def _times(task: TaskSpec, rate: float, f_i: float) -> Tuple[float, float]:
    return task.s / rate, task.c / f_i


def _transfer_delay(task, rate, f_i) -> float:
    sR, cf = _times(task, rate, f_i)
    return sR + cf


def _transfer_energy(task, uav, rate, f_i) -> float:
    sR, cf = _times(task, rate, f_i)
    return uav.P_t * sR + uav.P_I * cf


def partial_components(task: TaskSpec, uav: UavProfile, q: Quality,
                       rate: float, f_i: float, beta: float) -> PartialComponents:
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta={beta} outside [0, 1]")
    r = q.rates()
    local_t = task.c / uav.f_l
    local_e = uav.kappa * uav.f_l ** 2 * task.c
    g = task.gamma
    tau_l = (1.0 - beta) * (local_t + uav.rho * r.local)
    energy_l = (1.0 - beta) * (local_e + uav.xi * r.local)
    tau_o = beta * (local_t + g * _transfer_delay(task, rate, f_i) + uav.rho * r.offload)
    energy_o = beta * (local_e + g * _transfer_energy(task, uav, rate, f_i)
                       + uav.xi * r.offload)
    delta_p = (1.0 - beta) * uav.rho * r.local
    delta_op = beta * (g * _transfer_delay(task, rate, f_i) + uav.rho * r.offload)
    return PartialComponents(tau_l, energy_l, tau_o, energy_o, delta_p, delta_op)


def partial_total_cost(task: TaskSpec, uav: UavProfile, q: Quality,
                       rate: float, f_i: float, beta: float) -> Tuple[float, float, float]:
    """Return (total delay, UAV energy, weighted cost) at ratio beta.

    The lower-layer compute time c/f_l is counted once in full: every frame
    passes the UAV's lower layers whichever side finishes it.
    """
    p = partial_components(task, uav, q, rate, f_i, beta)
    tau = task.c / uav.f_l + max(p.delta_p, p.delta_op)
    energy = p.energy_l + p.energy_o
    return tau, energy, uav.theta * tau + (1.0 - uav.theta) * energy


def partial_error(q: Quality, beta: float) -> float:
    r = q.rates()
    return r.local - beta * r.gap


def beta_hat_case1(task: TaskSpec, uav: UavProfile, q: Quality,
                   rate: float, f_i: float) -> float:
    """Ratio at which the local penalty delay equals the offload delay."""
    r = q.rates()
    den = task.gamma * _transfer_delay(task, rate, f_i) + uav.rho * (r.local + r.offload)
    if den <= 0:
        raise ValueError("crossing ratio undefined: rho and gamma terms are all zero")
    return uav.rho * r.local / den


beta_feasibility_bound = mu_feasibility_bound


def energy_threshold(task, uav, q, rate, f_i) -> float:
    """gamma below which offloading lowers UAV energy (delay ignored)."""
    r = q.rates()
    return uav.xi * r.gap / _transfer_energy(task, uav, rate, f_i)


def case3_thresholds(task: TaskSpec, uav: UavProfile, q: Quality,
                     rate: float, f_i: float) -> Tuple[float, float]:
    """(gamma_T1, gamma_T2) for a mixed delay/energy weight 0 < theta < 1.

    gamma_T1 is where the cost slope left of the crossing ratio changes sign,
    gamma_T2 where the slope right of it does.
    """
    th = uav.theta
    if not 0.0 < th < 1.0:
        raise ValueError(f"theta={th} needs the delay-only or energy-only optimizer")
    r = q.rates()
    D_t = _transfer_delay(task, rate, f_i)
    D_e = _transfer_energy(task, uav, rate, f_i)
    t1 = (th * uav.rho * r.local / (1.0 - th) + uav.xi * r.gap) / D_e
    t2 = (((1.0 - th) * uav.xi * r.gap - th * uav.rho * r.offload)
          / (th * D_t + (1.0 - th) * D_e))
    return t1, t2


def penalty_branch_line(task: TaskSpec, uav: UavProfile, q: Quality,
                        rate: float, f_i: float) -> Tuple[float, float]:
    """Slope and intercept of the cost where the local penalty delay dominates.

    On beta <= beta_hat the cost equals slope*beta + intercept plus the
    beta-independent term (1-theta)*xi*eps_local, which the intercept omits.
    """
    th = uav.theta
    r = q.rates()
    D_e = _transfer_energy(task, uav, rate, f_i)
    slope = ((1.0 - th) * (task.gamma * D_e - uav.xi * r.gap)
             - th * uav.rho * r.local)
    intercept = (th * (task.c / uav.f_l + uav.rho * r.local)
                 + (1.0 - th) * uav.kappa * uav.f_l ** 2 * task.c)
    return slope, intercept


def _breakdown(task, uav, q, rate, f_i, beta, *, beta_hat, beta_tilde,
               tag, t1=None, t2=None, te=None) -> PartialCostBreakdown:
    p = partial_components(task, uav, q, rate, f_i, beta)
    tau, energy, cost = partial_total_cost(task, uav, q, rate, f_i, beta)
    r = q.rates()
    return PartialCostBreakdown(
        delta_p=p.delta_p, delta_op=p.delta_op, total_delay=tau, energy=energy,
        weighted_cost=cost, beta_hat=beta_hat, beta_tilde=beta_tilde,
        gamma_T1=t1, gamma_T2=t2, gamma_T_energy=te, beta_star=beta,
        case_tag=tag, avg_error=partial_error(q, beta), threshold=r.threshold,
        constraint_active=(beta == beta_tilde),
    )


def optimal_beta_case1(task, uav, q, rate, f_i) -> PartialCostBreakdown:
    """Delay-only optimum: the crossing ratio, raised to the error bound if needed."""
    bt = beta_feasibility_bound(q)
    bh = beta_hat_case1(task, uav, q, rate, f_i)
    return _breakdown(task, uav, q, rate, f_i, max(bh, bt),
                      beta_hat=bh, beta_tilde=bt, tag=BALANCED)


def optimal_beta_case2(task, uav, q, rate, f_i) -> PartialCostBreakdown:
    """Energy-only optimum. Energy is affine in beta, so an endpoint wins."""
    bt = beta_feasibility_bound(q)
    bh = beta_hat_case1(task, uav, q, rate, f_i)
    te = energy_threshold(task, uav, q, rate, f_i)
    if task.gamma < te:
        beta, tag = 1.0, FULL
    else:
        beta, tag = bt, THRESHOLD
    return _breakdown(task, uav, q, rate, f_i, beta,
                      beta_hat=bh, beta_tilde=bt, tag=tag, te=te)


def optimal_beta_case3(task, uav, q, rate, f_i) -> PartialCostBreakdown:
    """Optimum for 0 < theta < 1.

    gamma <= gamma_T2: cost falls on both sides of the kink, offload all.
    gamma_T2 < gamma <= gamma_T1: the kink is the unconstrained minimum.
    gamma > gamma_T1: cost rises everywhere; take the smaller of the kink and
    the error bound. If the bound sits above the kink there is no optimum in
    the penalty-dominated region and InfeasibleConfigurationError is raised.
    """
    t1, t2 = case3_thresholds(task, uav, q, rate, f_i)
    bt = beta_feasibility_bound(q)
    bh = beta_hat_case1(task, uav, q, rate, f_i)
    g = task.gamma
    if g <= t2:
        beta, tag = 1.0, FULL
    elif g <= t1:
        beta, tag = max(bh, bt), BALANCED
    else:
        if bt > bh:
            raise InfeasibleConfigurationError(
                f"gamma={g:.6g} > gamma_T1={t1:.6g} and error bound "
                f"{bt:.6g} exceeds crossing ratio {bh:.6g}: no optimal ratio")
        beta, tag = bt, THRESHOLD
    return _breakdown(task, uav, q, rate, f_i, beta, beta_hat=bh, beta_tilde=bt,
                      tag=tag, t1=t1, t2=t2, te=energy_threshold(task, uav, q, rate, f_i))


def optimal_beta(task, uav, q, rate, f_i) -> PartialCostBreakdown:
    """Dispatch on the delay weight theta."""
    if uav.theta == 1.0:
        return optimal_beta_case1(task, uav, q, rate, f_i)
    if uav.theta == 0.0:
        return optimal_beta_case2(task, uav, q, rate, f_i)
    return optimal_beta_case3(task, uav, q, rate, f_i)


def special_rates(q: QualityErrorModel) -> Tuple[EffectiveRates, bool]:
    """Error rates when Good frames stay local and Bad frames are offloaded.

    A threshold above eps_L cannot bind here; it is capped at eps_L so the
    error bound becomes beta = 0. Returns the rates and whether a cap applied.
    """
    if q.eps_T < q.eps_H:
        raise InfeasibleThresholdError(
            f"eps_T={q.eps_T:.6g} below the enhanced-inference error {q.eps_H:.6g}")
    capped = q.eps_T > q.eps_L
    return EffectiveRates(q.eps_L, q.eps_H, min(q.eps_T, q.eps_L)), capped


def optimal_beta_special(task: TaskSpec, uav: UavProfile, q: QualityErrorModel,
                         rate: float, f_i: float) -> PartialCostBreakdown:
    """Quality-aware split: same optimizer with the per-class error rates.

    Also reports the operating point beta = eta, where the offloaded share
    exactly matches the Bad-frame share.
    """
    if q.eps_L < q.eps_H:
        raise InfeasibleThresholdError(
            "quality-aware split needs eps_L >= eps_H")
    r, capped = special_rates(q)
    out = optimal_beta(task, uav, r, rate, f_i)
    split = q.eta
    _, _, split_cost = partial_total_cost(task, uav, r, rate, f_i, split)
    return replace(
        out,
        threshold=q.eps_T,
        constraint_active=out.constraint_active and not capped,
        split_beta=split,
        split_cost=split_cost,
        split_error=partial_error(r, split),
    )
