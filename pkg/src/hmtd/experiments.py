"""Parameter sweeps, oracle certification, and their file outputs."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, binary, oracle, partial
from .config import (
    ScenarioParams,
    SweepSpec,
    apply_param,
    build_scenario,
    params_from_mapping,
    resolved_summary,
)
from .fleet import allocate_mes, run_fixed, run_strategy
from .model import InfeasibleConfigurationError, InfeasibleThresholdError, data_rate

CSV_COLUMNS = ("param_value", "strategy", "total_cost", "mean_error",
               "decision_var", "case_tag", "error_feasible", "delay_feasible")


@dataclass(frozen=True)
class SweepRow:
    param_value: float
    strategy: str
    total_cost: float
    mean_error: float
    decision_var: Tuple[float, ...]
    case_tag: str
    error_feasible: bool
    delay_feasible: bool

    @property
    def ok(self) -> bool:
        return math.isfinite(self.total_cost)


def _failed_row(value, strategy, tag) -> SweepRow:
    nan = float("nan")
    return SweepRow(value, strategy, nan, nan, (), tag, False, False)


def sweep_params(params: ScenarioParams, sweep: SweepSpec) -> ScenarioParams:
    """Base parameters with the sweep's own overrides applied."""
    if not sweep.overrides:
        return params
    return params_from_mapping(sweep.overrides, base=params)


def run_sweep(params: ScenarioParams, sweep: SweepSpec) -> List[SweepRow]:
    """One row per (value, strategy) in value-major order.

    A point that has no optimum or an unreachable threshold yields a flagged
    row instead of stopping the sweep. For a beta sweep each strategy's
    decision variable is pinned to the swept value (TL and TO stay fixed).
    """
    base = sweep_params(params, sweep)
    rows: List[SweepRow] = []
    for value in sweep.values:
        for strategy in sweep.strategies:
            try:
                scenario = build_scenario(apply_param(base, sweep.param, value), strategy)
                if sweep.param == "beta":
                    rep = run_fixed(scenario, strategy, value)
                else:
                    rep = run_strategy(scenario)
            except InfeasibleConfigurationError:
                rows.append(_failed_row(value, strategy, "no_optimum"))
                continue
            except InfeasibleThresholdError:
                rows.append(_failed_row(value, strategy, "infeasible_threshold"))
                continue
            except ValueError:
                rows.append(_failed_row(value, strategy, "invalid"))
                continue
            tags = sorted({d.case_tag for d in rep.decisions})
            rows.append(SweepRow(
                param_value=value, strategy=strategy, total_cost=rep.total_cost,
                mean_error=rep.mean_error, decision_var=rep.decision_vars,
                case_tag="|".join(tags), error_feasible=rep.error_feasible,
                delay_feasible=rep.delay_feasible))
    return rows


def _fmt(x: float) -> str:
    return repr(float(x))


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            _fmt(r.param_value), r.strategy, _fmt(r.total_cost), _fmt(r.mean_error),
            ";".join(_fmt(v) for v in r.decision_var), r.case_tag,
            str(r.error_feasible).lower(), str(r.delay_feasible).lower(),
        ])
    return buf.getvalue()


def read_csv_rows(text: str) -> List[Dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def sweep_metadata(params: ScenarioParams, sweep: SweepSpec,
                   seed: Optional[int] = None) -> Dict[str, Any]:
    return {
        "tool": "hmtd",
        "version": __version__,
        "seed": seed,
        "sweep": {"name": sweep.label, "param": sweep.param,
                  "values": list(sweep.values), "strategies": list(sweep.strategies),
                  "overrides": sweep.overrides},
        "config": resolved_summary(sweep_params(params, sweep)),
        "columns": list(CSV_COLUMNS),
    }


def write_sweep(params: ScenarioParams, sweep: SweepSpec, csv_path: Path,
                rows: Optional[Sequence[SweepRow]] = None,
                seed: Optional[int] = None) -> List[SweepRow]:
    """Write <name>.csv and the adjacent <name>.json metadata file."""
    rows = list(rows) if rows is not None else run_sweep(params, sweep)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(rows_to_csv(rows))
    meta = sweep_metadata(params, sweep, seed)
    csv_path.with_suffix(".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return rows


# ---------------------------------------------------------------------------
# certification

PERTURBED = ("s", "cycles_per_bit", "gamma", "f_l", "F", "rho", "xi", "kappa",
             "P_t", "P_I", "eta", "eps_L", "eps_H", "margin", "theta", "B", "chi_sq",
             "altitude")


def perturb(p: ScenarioParams, rng: np.random.Generator,
            spread: float = 0.5) -> ScenarioParams:
    """Scale each parameter by an independent factor in [1-spread, 1+spread].

    Probabilities are clipped back into range and the threshold margin is
    shrunk if it would leave no room between the two effective error rates.
    """
    factors = rng.uniform(1.0 - spread, 1.0 + spread, size=len(PERTURBED))
    upd = {k: getattr(p, k) * f for k, f in zip(PERTURBED, factors)}
    upd["eta"] = min(upd["eta"], 1.0)
    upd["eps_L"] = min(upd["eps_L"], 0.99)
    upd["eps_H"] = min(upd["eps_H"], 0.99)
    upd["theta"] = min(upd["theta"], 1.0)
    q = replace(p, **upd)
    local = (1 - q.eta) * q.eps_L + q.eta
    gap = local - q.eta * q.eps_H
    margin = q.margin if q.margin < gap else 0.5 * gap
    return replace(q, margin=margin, eps_T=None, c=None)


@dataclass
class CheckStats:
    checked: int = 0
    max_cost_gap: float = 0.0
    max_var_gap: float = 0.0
    violations: int = 0
    no_optimum: int = 0

    def as_dict(self) -> Dict[str, Any]:
        return {"checked": self.checked, "max_cost_gap": self.max_cost_gap,
                "max_var_gap": self.max_var_gap, "violations": self.violations,
                "no_optimum": self.no_optimum}


@dataclass
class CertificationReport:
    draws: int
    seed: int
    resolution: float
    binary: CheckStats = field(default_factory=CheckStats)
    partial: CheckStats = field(default_factory=CheckStats)
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.binary.violations == 0 and self.partial.violations == 0

    def as_dict(self) -> Dict[str, Any]:
        return {"tool": "hmtd", "version": __version__, "draws": self.draws,
                "seed": self.seed, "resolution": self.resolution, "ok": self.ok,
                "binary": self.binary.as_dict(), "partial": self.partial.as_dict(),
                "failures": self.failures[:20]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def compare_to_grid(closed_var: float, closed_cost: float, closed_error: float,
                    threshold: float, grid: oracle.GridSearchResult,
                    cost_at) -> Tuple[List[str], float, float]:
    """Check a closed-form optimum against a grid result.

    Returns (problems, cost gap grid-minus-closed, distance to grid argmin).
    ``cost_at`` evaluates the objective at one point, used to tell a genuine
    location mismatch from a tie on a flat stretch.
    """
    problems = []
    scale = max(1.0, abs(closed_cost))
    tol = 1e-9 * scale
    if closed_error > threshold + oracle.FEASIBILITY_SLACK:
        problems.append("closed form violates error threshold")
    if grid.empty:
        problems.append("oracle found no feasible grid point")
        return problems, math.inf, math.inf
    gap = grid.best_cost - closed_cost
    if gap < -tol:
        problems.append("grid beats closed form")
    if gap > grid.resolution * grid.slope_bound + tol:
        problems.append("closed form worse than grid beyond resolution bound")
    dist = abs(grid.best_var - closed_var)
    if dist > grid.resolution * (1 + 1e-6):
        if abs(cost_at(grid.best_var) - closed_cost) > grid.resolution * grid.slope_bound + tol:
            problems.append("argmin location mismatch")
    return problems, gap, dist


def certify(params: ScenarioParams, draws: int, seed: int,
            resolution: float = oracle.DEFAULT_RESOLUTION) -> CertificationReport:
    """Closed form vs grid oracle for BO and PO over seeded random draws."""
    rng = np.random.default_rng(seed)
    rep = CertificationReport(draws=draws, seed=seed, resolution=resolution)
    for k in range(draws):
        p = perturb(params, rng)
        sc = build_scenario(p)
        for slot, f_i in zip(sc.uavs, allocate_mes(sc.mes, sc.n)):
            _certify_slot(rep, k, slot, f_i, resolution)
    return rep


def _certify_slot(rep: CertificationReport, k: int, slot, f_i: float,
                  resolution: float) -> None:
    t, u, q = slot.task, slot.profile, slot.quality
    rate = data_rate(slot.link, u)

    bd = binary.optimal_mu(t, u, q, rate, f_i)
    grid = oracle.grid_min_binary(t, u, q, rate, f_i, resolution)
    probs, gap, dist = compare_to_grid(
        bd.mu_star, bd.expected_cost, bd.avg_error, q.eps_T, grid,
        lambda m: binary.binary_cost_at(t, u, q, rate, f_i, m))
    _tally(rep, rep.binary, k, "BO", probs, gap, dist)

    try:
        pd = partial.optimal_beta(t, u, q, rate, f_i)
    except InfeasibleConfigurationError:
        rep.partial.no_optimum += 1
        return
    grid = oracle.grid_min_partial(t, u, q, rate, f_i, resolution=resolution)
    probs, gap, dist = compare_to_grid(
        pd.beta_star, pd.weighted_cost, pd.avg_error, q.eps_T, grid,
        lambda b: partial.partial_total_cost(t, u, q, rate, f_i, b)[2])
    _tally(rep, rep.partial, k, "PO", probs, gap, dist)


def _tally(rep, stats: CheckStats, k, label, probs, gap, dist) -> None:
    stats.checked += 1
    stats.max_cost_gap = max(stats.max_cost_gap, abs(gap))
    stats.max_var_gap = max(stats.max_var_gap, dist)
    if probs:
        stats.violations += 1
        rep.failures.append({"draw": k, "strategy": label, "problems": probs})
