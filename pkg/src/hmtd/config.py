"""Scenario configuration: built-in defaults, YAML loading with field-level
validation, and sweep specifications."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .fleet import STRATEGIES, Scenario, UavSlot, allocate_mes
from .model import (
    InfeasibleThresholdError,
    LinkModel,
    MesProfile,
    QualityErrorModel,
    TaskSpec,
    UavProfile,
    check_penalty_dominates,
    db_to_linear,
    error_threshold_default,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioParams:
    """Flat parameter set for a homogeneous fleet (per-UAV offsets aside)."""
    n: int = 2
    s: float = 1e6
    c: Optional[float] = None
    cycles_per_bit: float = 1000.0
    sigma: float = 10.0
    gamma: float = 7.0
    f_l: float = 1e9
    kappa: float = 1e-28
    P_t: float = 10.0
    P_I: float = 5.0
    rho: float = 8.0
    xi: float = 8.0
    theta: float = 0.5
    eta: float = 0.5
    eps_L: float = 0.3
    eps_H: float = 0.2
    margin: float = 0.1
    eps_T: Optional[float] = None
    h0: float = 1e-5
    altitude: float = 100.0
    offsets: Tuple[float, ...] = (20.0,)
    B: float = 10e6
    chi_sq: float = 7.9e-13
    F: float = 10e9

    @property
    def cycles(self) -> float:
        return self.c if self.c is not None else self.cycles_per_bit * self.s

    def quality(self) -> QualityErrorModel:
        base = QualityErrorModel(self.eta, self.eps_L, self.eps_H, 0.0)
        eps_T = self.eps_T
        if eps_T is None:
            eps_T = error_threshold_default(base, self.margin)
        return replace(base, eps_T=eps_T)

    def offset(self, k: int) -> float:
        return self.offsets[k] if len(self.offsets) > 1 else self.offsets[0]


def build_scenario(p: ScenarioParams, strategy: str = "PO") -> Scenario:
    if len(p.offsets) > 1 and len(p.offsets) != p.n:
        raise ConfigError(f"link.offset_m: {len(p.offsets)} offsets for n={p.n} UAVs")
    task = TaskSpec(p.s, p.cycles, p.sigma, p.gamma)
    prof = UavProfile(p.f_l, p.kappa, p.P_t, p.P_I, p.rho, p.xi, p.theta)
    q = p.quality()
    slots = tuple(
        UavSlot(task, prof,
                LinkModel(p.h0, p.altitude, (0.0, 0.0), (p.offset(k), 0.0),
                          p.B, p.n, p.chi_sq),
                q)
        for k in range(p.n))
    return Scenario(slots, MesProfile(p.F), strategy)


def _positive(v):
    return v > 0


def _nonneg(v):
    return v >= 0


def _unit(v):
    return 0 <= v <= 1


def _open_unit(v):
    return 0 < v < 1


# (section, key) -> (ScenarioParams attribute, predicate, description)
_FIELDS: Dict[Tuple[str, str], Tuple[str, Any, str]] = {
    ("fleet", "n"): ("n", lambda v: v >= 1 and float(v).is_integer(), "an integer >= 1"),
    ("task", "s_bits"): ("s", _positive, "> 0"),
    ("task", "c_cycles"): ("c", _positive, "> 0"),
    ("task", "cycles_per_bit"): ("cycles_per_bit", _positive, "> 0"),
    ("task", "sigma_s"): ("sigma", _positive, "> 0"),
    ("task", "gamma"): ("gamma", _positive, "> 0"),
    ("uav", "f_l_hz"): ("f_l", _positive, "> 0"),
    ("uav", "kappa"): ("kappa", _positive, "> 0"),
    ("uav", "P_t_w"): ("P_t", _positive, "> 0"),
    ("uav", "P_I_w"): ("P_I", _nonneg, ">= 0"),
    ("uav", "rho_s"): ("rho", _nonneg, ">= 0"),
    ("uav", "xi_j"): ("xi", _nonneg, ">= 0"),
    ("uav", "theta"): ("theta", _unit, "in [0, 1]"),
    ("quality", "eta"): ("eta", _unit, "in [0, 1]"),
    ("quality", "eps_L"): ("eps_L", _open_unit, "in (0, 1)"),
    ("quality", "eps_H"): ("eps_H", _open_unit, "in (0, 1)"),
    ("quality", "margin"): ("margin", _positive, "> 0"),
    ("quality", "eps_T"): ("eps_T", _unit, "in [0, 1]"),
    ("link", "h0_linear"): ("h0", _positive, "> 0"),
    ("link", "altitude_m"): ("altitude", _positive, "> 0"),
    ("link", "B_hz"): ("B", _positive, "> 0"),
    ("link", "chi_sq_w"): ("chi_sq", _positive, "> 0"),
    ("mes", "F_hz"): ("F", _positive, "> 0"),
}
_TOP_LEVEL = {"fleet", "task", "uav", "quality", "link", "mes", "sweeps", "seed"}

SWEEP_PARAMS = ("gamma", "beta", "F", "n", "eta", "eps_T", "theta")


def _number(where: str, v: Any) -> float:
    # pyyaml reads 1e6 (no dot) as a string
    if isinstance(v, bool):
        raise ConfigError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        out = float(v)
    else:
        try:
            out = float(str(v))
        except ValueError:
            raise ConfigError(f"{where}: expected a number, got {v!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{where}: must be finite")
    return out


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: Tuple[float, ...]
    strategies: Tuple[str, ...] = STRATEGIES
    output: Optional[str] = None
    name: Optional[str] = None
    overrides: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise ConfigError(f"sweep.param: {self.param!r} not in {SWEEP_PARAMS}")
        if not self.values:
            raise ConfigError("sweep.values: range is empty")
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad or not self.strategies:
            raise ConfigError(f"sweep.strategies: unknown {bad}; pick from {STRATEGIES}")

    @property
    def label(self) -> str:
        return self.name or self.param


def expand_range(where: str, spec: Any) -> Tuple[float, ...]:
    """Explicit list, or {start, stop, step} inclusive of stop."""
    if isinstance(spec, (list, tuple)):
        return tuple(_number(f"{where}[{k}]", v) for k, v in enumerate(spec))
    if isinstance(spec, dict):
        try:
            start = _number(f"{where}.start", spec["start"])
            stop = _number(f"{where}.stop", spec["stop"])
            step = _number(f"{where}.step", spec["step"])
        except KeyError as e:
            raise ConfigError(f"{where}: missing {e.args[0]!r}") from None
        if step <= 0:
            raise ConfigError(f"{where}.step: must be > 0")
        if stop < start:
            raise ConfigError(f"{where}: stop < start gives an empty range")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 12) for k in range(count))
    raise ConfigError(f"{where}: expected a list or a start/stop/step mapping")


def params_from_mapping(raw: Dict[str, Any],
                        base: ScenarioParams = ScenarioParams()) -> ScenarioParams:
    updates: Dict[str, Any] = {}
    for section, body in raw.items():
        if section in ("sweeps", "seed"):
            continue
        if section not in _TOP_LEVEL:
            raise ConfigError(f"{section}: unknown section")
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"{section}: expected a mapping")
        for key, value in body.items():
            where = f"{section}.{key}"
            if (section, key) == ("link", "offset_m"):
                vals = value if isinstance(value, (list, tuple)) else [value]
                offs = tuple(_number(where, v) for v in vals)
                if not offs:
                    raise ConfigError(f"{where}: empty")
                updates["offsets"] = offs
                continue
            if (section, key) == ("link", "h0_db"):
                if "h0_linear" in body:
                    raise ConfigError("link: give h0_db or h0_linear, not both")
                updates["h0"] = db_to_linear(_number(where, value))
                continue
            if (section, key) not in _FIELDS:
                raise ConfigError(f"{where}: unknown key")
            attr, ok, desc = _FIELDS[(section, key)]
            v = _number(where, value)
            if not ok(v):
                raise ConfigError(f"{where}: must be {desc}, got {v:g}")
            updates[attr] = int(v) if attr == "n" else v
    if "c" in updates and "cycles_per_bit" in updates:
        raise ConfigError("task: give c_cycles or cycles_per_bit, not both")
    p = replace(base, **updates)
    check_params(p)
    return p


def check_params(p: ScenarioParams) -> None:
    """Cross-field checks that need the whole parameter set."""
    try:
        sc = build_scenario(p)
        for slot, f_i in zip(sc.uavs, allocate_mes(sc.mes, sc.n)):
            check_penalty_dominates(slot.task, slot.profile, f_i)
    except InfeasibleThresholdError as e:
        where = "quality.eps_T" if p.eps_T is not None else "quality.margin"
        raise ConfigError(f"{where}: {e}") from None
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from None


def parse_sweeps(raw: Any) -> List[SweepSpec]:
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise ConfigError("sweeps: expected a list")
    out = []
    for k, item in enumerate(raw):
        where = f"sweeps[{k}]"
        if not isinstance(item, dict):
            raise ConfigError(f"{where}: expected a mapping")
        unknown = set(item) - {"param", "values", "strategies", "output", "name", "overrides"}
        if unknown:
            raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
        if "param" not in item or "values" not in item:
            raise ConfigError(f"{where}: needs 'param' and 'values'")
        strategies = tuple(item.get("strategies") or STRATEGIES)
        overrides = item.get("overrides") or {}
        if not isinstance(overrides, dict):
            raise ConfigError(f"{where}.overrides: expected a mapping")
        try:
            out.append(SweepSpec(
                param=str(item["param"]),
                values=expand_range(f"{where}.values", item["values"]),
                strategies=strategies,
                output=item.get("output"),
                name=item.get("name"),
                overrides=overrides,
            ))
        except ConfigError as e:
            raise ConfigError(f"{where}: {e}") from None
    return out


@dataclass(frozen=True)
class LoadedConfig:
    params: ScenarioParams
    sweeps: Tuple[SweepSpec, ...]
    seed: Optional[int]
    raw: Dict[str, Any]


def load_config(path: Optional[str]) -> LoadedConfig:
    """Read a YAML config; every missing field takes its built-in default."""
    raw: Dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"{path}: {e.strerror}") from None
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: parse error: {e}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
    unknown = set(raw) - _TOP_LEVEL
    if unknown:
        raise ConfigError(f"unknown sections {sorted(unknown)}")
    params = params_from_mapping(raw)
    sweeps = tuple(parse_sweeps(raw.get("sweeps")))
    seed = raw.get("seed")
    if seed is not None and not (isinstance(seed, int) and not isinstance(seed, bool)):
        raise ConfigError("seed: expected an integer")
    return LoadedConfig(params, sweeps, seed, raw)


def params_to_mapping(p: ScenarioParams) -> Dict[str, Any]:
    """Inverse of params_from_mapping, with h0 given in linear units."""
    task: Dict[str, Any] = {"s_bits": p.s, "sigma_s": p.sigma, "gamma": p.gamma}
    if p.c is not None:
        task["c_cycles"] = p.c
    else:
        task["cycles_per_bit"] = p.cycles_per_bit
    quality: Dict[str, Any] = {"eta": p.eta, "eps_L": p.eps_L, "eps_H": p.eps_H,
                               "margin": p.margin}
    if p.eps_T is not None:
        quality["eps_T"] = p.eps_T
    offsets: Any = p.offsets[0] if len(p.offsets) == 1 else list(p.offsets)
    return {
        "fleet": {"n": p.n},
        "task": task,
        "uav": {"f_l_hz": p.f_l, "kappa": p.kappa, "P_t_w": p.P_t, "P_I_w": p.P_I,
                "rho_s": p.rho, "xi_j": p.xi, "theta": p.theta},
        "quality": quality,
        "link": {"h0_linear": p.h0, "altitude_m": p.altitude, "offset_m": offsets,
                 "B_hz": p.B, "chi_sq_w": p.chi_sq},
        "mes": {"F_hz": p.F},
    }


def dump_defaults() -> str:
    body = params_to_mapping(ScenarioParams())
    body["link"] = {"h0_db": -50.0, **{k: v for k, v in body["link"].items()
                                       if k != "h0_linear"}}
    return yaml.safe_dump(body, sort_keys=False)


def apply_param(p: ScenarioParams, name: str, value: float) -> ScenarioParams:
    """Set one sweep parameter. eta leaves eps_T to follow the margin unless
    the config pinned eps_T explicitly."""
    if name == "gamma":
        return replace(p, gamma=value)
    if name == "F":
        return replace(p, F=value)
    if name == "n":
        if not float(value).is_integer() or value < 1:
            raise ConfigError(f"sweep n: {value} is not a positive integer")
        return replace(p, n=int(value))
    if name == "eta":
        return replace(p, eta=value)
    if name == "eps_T":
        return replace(p, eps_T=value)
    if name == "theta":
        return replace(p, theta=value)
    if name == "beta":
        return p
    raise ConfigError(f"unknown sweep parameter {name!r}")


def resolved_summary(p: ScenarioParams) -> Dict[str, Any]:
    out = asdict(p)
    out["offsets"] = list(p.offsets)
    out["c_resolved"] = p.cycles
    out["eps_T_resolved"] = p.quality().eps_T
    return out
