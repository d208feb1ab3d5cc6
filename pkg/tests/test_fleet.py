import math
from dataclasses import replace

import pytest

from hmtd.config import ScenarioParams, build_scenario
from hmtd.fleet import (
    BO,
    PO,
    PO_SPECIAL,
    STRATEGIES,
    TL,
    TO,
    MesProfile,
    Scenario,
    allocate_mes,
    run_fixed,
    run_strategy,
)


@pytest.fixture(scope="module")
def scenario():
    return build_scenario(ScenarioParams())


def test_equal_allocation():
    assert allocate_mes(MesProfile(10e9), 4) == (2.5e9,) * 4
    assert allocate_mes(MesProfile(10e9), 0) == ()


@pytest.mark.parametrize("strategy, total, err", [
    (TL, 11.5, 0.65),
    (TO, 2 * 6.117372842152292, 0.10),
    (BO, None, 0.55),
    (PO, None, None),
])
def test_default_strategy_totals(scenario, strategy, total, err):
    rep = run_strategy(scenario, strategy)
    assert len(rep.decisions) == 2
    if total is not None:
        assert rep.total_cost == pytest.approx(total, rel=1e-12)
    if err is not None:
        assert rep.mean_error == pytest.approx(err, abs=1e-12)


def test_optimizers_never_worse_than_feasible_baselines(scenario):
    reps = {s: run_strategy(scenario, s) for s in STRATEGIES}
    assert reps[PO].total_cost <= reps[BO].total_cost + 1e-12
    assert reps[BO].total_cost <= reps[TO].total_cost + 1e-12
    assert not reps[TL].error_feasible
    for s in (TO, BO, PO, PO_SPECIAL):
        assert reps[s].error_feasible


def test_total_is_sum_of_decisions(scenario):
    rep = run_strategy(scenario, PO)
    assert rep.total_cost == math.fsum(d.cost for d in rep.decisions)
    assert rep.decision_vars == tuple(d.decision_var for d in rep.decisions)


def test_delay_flag(scenario):
    rep = run_strategy(scenario, PO)
    assert rep.delay_feasible
    tight = build_scenario(ScenarioParams(sigma=1.5))
    assert not run_strategy(tight, PO).delay_feasible


def test_fixed_values(scenario):
    rep = run_fixed(scenario, BO, 0.0)
    assert rep.total_cost == pytest.approx(11.5)
    assert [d.case_tag for d in rep.decisions] == ["fixed", "fixed"]
    assert run_fixed(scenario, TO, 0.3).decision_vars == (1.0, 1.0)
    with pytest.raises(ValueError):
        run_fixed(scenario, PO, 1.2)


def test_scenario_validation(scenario):
    with pytest.raises(ValueError, match="strategy"):
        Scenario(scenario.uavs, scenario.mes, "XX")
    with pytest.raises(ValueError, match="fleet"):
        Scenario(scenario.uavs[:1], scenario.mes)
    with pytest.raises(ValueError):
        run_strategy(scenario, "nope")


def test_explicit_allocation_respected(scenario):
    mes = MesProfile(10e9, allocation=(8e9, 2e9))
    rep = run_strategy(replace(scenario, mes=mes), TO)
    assert rep.decisions[0].cost < rep.decisions[1].cost


def test_more_uavs_cost_more():
    totals = [run_strategy(build_scenario(ScenarioParams(n=n)), PO).total_cost
              for n in range(1, 6)]
    assert all(b > a for a, b in zip(totals, totals[1:]))
