import json
import math

import numpy as np
import pytest

from hmtd.config import ScenarioParams, SweepSpec
from hmtd.experiments import (
    CSV_COLUMNS,
    certify,
    perturb,
    read_csv_rows,
    rows_to_csv,
    run_sweep,
    write_sweep,
)


def test_sweep_row_order_and_columns():
    sw = SweepSpec("gamma", (1.0, 7.0), ("TL", "PO"))
    rows = run_sweep(ScenarioParams(), sw)
    assert [(r.param_value, r.strategy) for r in rows] == [
        (1.0, "TL"), (1.0, "PO"), (7.0, "TL"), (7.0, "PO")]
    parsed = read_csv_rows(rows_to_csv(rows))
    assert tuple(parsed[0]) == CSV_COLUMNS
    assert parsed[3]["case_tag"] == "balanced"
    assert parsed[0]["error_feasible"] == "false"
    assert float(parsed[3]["decision_var"].split(";")[0]) == pytest.approx(0.6930414521272048)


def test_failed_points_are_flagged_not_fatal():
    sw = SweepSpec("eps_T", (0.05, 0.3, 0.55), ("BO", "PO"), overrides={"task": {"gamma": 30}})
    rows = run_sweep(ScenarioParams(), sw)
    tags = [r.case_tag for r in rows]
    assert tags[:2] == ["infeasible_threshold", "infeasible_threshold"]
    assert tags[3] == "no_optimum"
    assert math.isnan(rows[3].total_cost) and not rows[3].ok
    assert rows[5].ok


def test_beta_sweep_pins_decision():
    sw = SweepSpec("beta", (0.0, 0.5, 1.0), ("PO",))
    rows = run_sweep(ScenarioParams(), sw)
    assert [r.decision_var for r in rows] == [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)]


def test_write_sweep_metadata(tmp_path):
    sw = SweepSpec("n", (1.0, 2.0), ("BO",), name="fleet")
    write_sweep(ScenarioParams(), sw, tmp_path / "fleet.csv", seed=5)
    meta = json.loads((tmp_path / "fleet.json").read_text())
    assert meta["seed"] == 5 and meta["sweep"]["param"] == "n"
    assert meta["config"]["eps_T_resolved"] == pytest.approx(0.55)


def test_perturb_stays_valid():
    rng = np.random.default_rng(0)
    for _ in range(200):
        p = perturb(ScenarioParams(), rng)
        assert 0 <= p.eta <= 1 and 0 <= p.theta <= 1
        q = p.quality()
        assert q.rates().offload < q.eps_T < q.rates().local


def test_certify_small_run():
    rep = certify(ScenarioParams(), draws=20, seed=3, resolution=1e-3)
    assert rep.ok
    assert rep.binary.checked == 40
    assert rep.partial.checked + rep.partial.no_optimum == 40
    assert json.loads(rep.to_json())["ok"] is True
