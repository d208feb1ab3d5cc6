"""Multi-UAV scenarios: MES CPU allocation, the five offloading strategies,
and fleet totals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

from . import binary, partial
from .model import (
    LinkModel,
    MesProfile,
    QualityErrorModel,
    TaskSpec,
    UavProfile,
    check_penalty_dominates,
    data_rate,
)

TL, TO, BO, PO, PO_SPECIAL = "TL", "TO", "BO", "PO", "PO_SPECIAL"
STRATEGIES = (TL, TO, BO, PO, PO_SPECIAL)
ERROR_SLACK = 1e-12

Breakdown = Union[binary.BinaryCostBreakdown, partial.PartialCostBreakdown]
Allocator = Callable[[MesProfile, int], Tuple[float, ...]]


def allocate_mes(mes: MesProfile, n: int) -> Tuple[float, ...]:
    """Equal split F/n, the same rule the uplink band uses."""
    if n <= 0:
        return ()
    return (mes.F / n,) * n


@dataclass(frozen=True)
class UavSlot:
    task: TaskSpec
    profile: UavProfile
    link: LinkModel
    quality: QualityErrorModel


@dataclass(frozen=True)
class Scenario:
    uavs: Tuple[UavSlot, ...]
    mes: MesProfile
    strategy: str = PO

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; pick one of {STRATEGIES}")
        n = len(self.uavs)
        for k, slot in enumerate(self.uavs):
            if slot.link.n != n:
                raise ValueError(f"uav {k}: link shares band among {slot.link.n}, fleet has {n}")
        if self.mes.allocation and len(self.mes.allocation) != n:
            raise ValueError("MES allocation length differs from fleet size")

    @property
    def n(self) -> int:
        return len(self.uavs)


@dataclass(frozen=True)
class OffloadDecision:
    strategy: str
    decision_var: float
    cost: float
    avg_error: float
    threshold: float
    delay: float
    sigma: float
    case_tag: str
    constraint_active: bool
    breakdown: Optional[Breakdown] = None

    @property
    def error_feasible(self) -> bool:
        return self.avg_error <= self.threshold + ERROR_SLACK

    @property
    def delay_feasible(self) -> bool:
        return self.delay <= self.sigma


@dataclass(frozen=True)
class StrategyReport:
    strategy: str
    decisions: Tuple[OffloadDecision, ...]
    total_cost: float
    mean_error: float

    @property
    def error_feasible(self) -> bool:
        return all(d.error_feasible for d in self.decisions)

    @property
    def delay_feasible(self) -> bool:
        return all(d.delay_feasible for d in self.decisions)

    @property
    def decision_vars(self) -> Tuple[float, ...]:
        return tuple(d.decision_var for d in self.decisions)


def _resolve(scenario: Scenario, allocate: Allocator):
    f = scenario.mes.allocation or allocate(scenario.mes, scenario.n)
    if sum(f) > scenario.mes.F * (1 + 1e-12):
        raise ValueError("allocation exceeds MES capacity F")
    out = []
    for slot, f_i in zip(scenario.uavs, f):
        check_penalty_dominates(slot.task, slot.profile, f_i)
        out.append((slot, data_rate(slot.link, slot.profile), f_i))
    return out


def _binary_decision(strategy, slot, rate, f_i, mu, tag, active, bd=None):
    t, u, q = slot.task, slot.profile, slot.quality
    return OffloadDecision(
        strategy=strategy, decision_var=mu,
        cost=binary.binary_cost_at(t, u, q, rate, f_i, mu),
        avg_error=binary.average_error(q, mu), threshold=q.eps_T,
        delay=binary.expected_delay(t, u, q, rate, f_i, mu), sigma=t.sigma,
        case_tag=tag, constraint_active=active, breakdown=bd)


def _partial_decision(strategy, slot, bd: partial.PartialCostBreakdown):
    return OffloadDecision(
        strategy=strategy, decision_var=bd.beta_star, cost=bd.weighted_cost,
        avg_error=bd.avg_error, threshold=slot.quality.eps_T,
        delay=bd.total_delay, sigma=slot.task.sigma, case_tag=bd.case_tag,
        constraint_active=bd.constraint_active, breakdown=bd)


def _decide(strategy: str, slot: UavSlot, rate: float, f_i: float) -> OffloadDecision:
    t, u, q = slot.task, slot.profile, slot.quality
    if strategy == TL:
        return _binary_decision(TL, slot, rate, f_i, 0.0, "local", False)
    if strategy == TO:
        return _binary_decision(TO, slot, rate, f_i, 1.0, "offload", False)
    if strategy == BO:
        bd = binary.optimal_mu(t, u, q, rate, f_i)
        d = _binary_decision(BO, slot, rate, f_i, bd.mu_star, bd.case_tag,
                             bd.constraint_active, bd)
        return d
    if strategy == PO:
        return _partial_decision(PO, slot, partial.optimal_beta(t, u, q, rate, f_i))
    if strategy == PO_SPECIAL:
        return _partial_decision(PO_SPECIAL, slot,
                                 partial.optimal_beta_special(t, u, q, rate, f_i))
    raise ValueError(f"unknown strategy {strategy!r}")


def _fixed_decision(strategy: str, slot: UavSlot, rate: float, f_i: float,
                    value: float) -> OffloadDecision:
    """Evaluate a strategy with its decision variable pinned to ``value``."""
    t, u, q = slot.task, slot.profile, slot.quality
    if strategy in (TL, TO):
        return _decide(strategy, slot, rate, f_i)
    if strategy == BO:
        return _binary_decision(BO, slot, rate, f_i, value, "fixed", False)
    if strategy == PO:
        r = q
    elif strategy == PO_SPECIAL:
        r, _ = partial.special_rates(q)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    tau, _, cost = partial.partial_total_cost(t, u, r, rate, f_i, value)
    return OffloadDecision(
        strategy=strategy, decision_var=value, cost=cost,
        avg_error=partial.partial_error(r, value), threshold=q.eps_T,
        delay=tau, sigma=t.sigma, case_tag="fixed", constraint_active=False)


def _report(strategy: str, decisions: Sequence[OffloadDecision]) -> StrategyReport:
    decisions = tuple(decisions)
    n = len(decisions)
    total = math.fsum(d.cost for d in decisions)
    mean_err = math.fsum(d.avg_error for d in decisions) / n if n else 0.0
    return StrategyReport(strategy, decisions, total, mean_err)


def run_strategy(scenario: Scenario, strategy: Optional[str] = None,
                 allocate: Allocator = allocate_mes) -> StrategyReport:
    """Evaluate one strategy across the fleet.

    TL and TO never fail on a violated error threshold; the report flags it.
    PO raises InfeasibleConfigurationError when some UAV has no optimal ratio.
    """
    strategy = strategy or scenario.strategy
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    resolved = _resolve(scenario, allocate)
    return _report(strategy, [_decide(strategy, s, r, f) for s, r, f in resolved])


def run_fixed(scenario: Scenario, strategy: str, value: float,
              allocate: Allocator = allocate_mes) -> StrategyReport:
    """Like run_strategy but with mu (BO) or beta (PO, PO_SPECIAL) pinned."""
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"decision value {value} outside [0, 1]")
    resolved = _resolve(scenario, allocate)
    return _report(strategy, [_fixed_decision(strategy, s, r, f, value)
                              for s, r, f in resolved])
