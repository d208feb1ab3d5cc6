"""Shared domain types, the UAV-to-MES line-of-sight link, and the
quality-dependent inference error model.

All records are frozen dataclasses; every function here is pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union


class InfeasibleThresholdError(ValueError):
    """Error threshold lies outside the range the offloading decision can reach."""


class InfeasibleConfigurationError(ValueError):
    """The constrained optimum does not exist for this parameter combination."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class TaskSpec:
    s: float          # input size, bits
    c: float          # CPU cycles for the whole task
    sigma: float      # max tolerable delay, s
    gamma: float      # output-to-input size ratio of the lower layers

    def __post_init__(self):
        _require(self.s > 0, "s must be > 0")
        _require(self.c > 0, "c must be > 0")
        _require(self.sigma > 0, "sigma must be > 0")
        _require(self.gamma > 0, "gamma must be > 0")


@dataclass(frozen=True)
class UavProfile:
    f_l: float        # local CPU frequency, cycles/s
    kappa: float      # switched-capacitance energy coefficient
    P_t: float        # transmit power, W
    P_I: float        # idle power while waiting on the MES, W
    rho: float        # task-drop delay penalty, s
    xi: float         # task-drop energy penalty, J
    theta: float      # weight on delay; 1 - theta weighs energy

    def __post_init__(self):
        _require(self.f_l > 0, "f_l must be > 0")
        _require(self.kappa > 0, "kappa must be > 0")
        _require(self.P_t > 0, "P_t must be > 0")
        _require(self.P_I >= 0, "P_I must be >= 0")
        _require(self.rho >= 0, "rho must be >= 0")
        _require(self.xi >= 0, "xi must be >= 0")
        _require(0.0 <= self.theta <= 1.0, "theta must lie in [0, 1]")

    @property
    def penalty(self) -> float:
        """Weighted drop penalty theta*rho + (1-theta)*xi."""
        return self.theta * self.rho + (1.0 - self.theta) * self.xi


def check_penalty_dominates(task: TaskSpec, uav: UavProfile, f_i: float) -> None:
    """Raise unless the delay penalty exceeds both local and MES compute times."""
    worst = max(task.c / uav.f_l, task.c / f_i)
    if not uav.rho > worst:
        raise ValueError(
            f"rho={uav.rho} must exceed max(c/f_l, c/f_i)={worst:.6g}")


@dataclass(frozen=True)
class LinkModel:
    h0: float                                  # linear power gain at 1 m
    altitude: float                            # m
    mes_position: Tuple[float, float]
    uav_position: Tuple[float, float]
    B: float                                   # total bandwidth, Hz
    n: int                                     # UAVs sharing B
    chi_sq: float                              # noise power, W

    def __post_init__(self):
        _require(self.h0 > 0, "h0 must be > 0")
        _require(self.altitude > 0, "altitude must be > 0")
        _require(self.B > 0, "B must be > 0")
        _require(self.n >= 1, "n must be >= 1")
        _require(self.chi_sq > 0, "chi_sq must be > 0")


@dataclass(frozen=True)
class EffectiveRates:
    """Quality-averaged error of fast (local) and enhanced (MES) inference,
    plus the per-UAV threshold they are checked against."""
    local: float
    offload: float
    threshold: float

    @property
    def gap(self) -> float:
        return self.local - self.offload

    def rates(self) -> "EffectiveRates":
        return self


@dataclass(frozen=True)
class QualityErrorModel:
    eta: float        # probability a frame is Bad
    eps_L: float      # fast-inference error on Good frames
    eps_H: float      # enhanced-inference error on Bad frames
    eps_T: float      # per-UAV error threshold

    def __post_init__(self):
        _require(0.0 <= self.eta <= 1.0, "eta must lie in [0, 1]")
        _require(0.0 < self.eps_L < 1.0, "eps_L must lie in (0, 1)")
        _require(0.0 < self.eps_H < 1.0, "eps_H must lie in (0, 1)")
        _require(self.eps_T >= 0.0, "eps_T must be >= 0")

    def rates(self) -> EffectiveRates:
        local, offload = effective_error_rates(self)
        return EffectiveRates(local, offload, self.eps_T)


Quality = Union[QualityErrorModel, EffectiveRates]


@dataclass(frozen=True)
class MesProfile:
    F: float
    allocation: Tuple[float, ...] = ()

    def __post_init__(self):
        _require(self.F > 0, "F must be > 0")
        _require(all(f > 0 for f in self.allocation), "every f_i must be > 0")
        _require(sum(self.allocation) <= self.F * (1 + 1e-12),
                 "sum of f_i exceeds F")


def channel_gain(link: LinkModel) -> float:
    dx = link.mes_position[0] - link.uav_position[0]
    dy = link.mes_position[1] - link.uav_position[1]
    return link.h0 / (link.altitude ** 2 + dx * dx + dy * dy)


def data_rate(link: LinkModel, uav: UavProfile) -> float:
    """Uplink rate in bits/s on an equal 1/n share of the band.

    The channel gain is already a power gain, so it enters the SNR unsquared.
    """
    snr = uav.P_t * channel_gain(link) / link.chi_sq
    return link.B / link.n * math.log2(1.0 + snr)


def effective_error_rates(q: QualityErrorModel) -> Tuple[float, float]:
    local = (1.0 - q.eta) * q.eps_L + q.eta
    offload = q.eta * q.eps_H
    return local, offload


def error_threshold_default(q: QualityErrorModel, e: float = 0.1) -> float:
    """Threshold set a fixed margin below the all-local error rate."""
    local, offload = effective_error_rates(q)
    if not 0.0 < e < local - offload:
        raise InfeasibleThresholdError(
            f"margin e={e} must lie strictly inside (0, {local - offload:.6g})")
    return local - e


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)
