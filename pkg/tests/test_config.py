from dataclasses import replace

import pytest
import yaml

from hmtd.config import (
    ConfigError,
    ScenarioParams,
    SweepSpec,
    apply_param,
    dump_defaults,
    expand_range,
    load_config,
    params_from_mapping,
    params_to_mapping,
    parse_sweeps,
)


def write(tmp_path, body):
    path = tmp_path / "cfg.yaml"
    path.write_text(body if isinstance(body, str) else yaml.safe_dump(body))
    return str(path)


def test_no_file_gives_defaults():
    cfg = load_config(None)
    assert cfg.params == ScenarioParams()
    assert cfg.sweeps == () and cfg.seed is None


def test_defaults_resolve():
    p = ScenarioParams()
    assert p.cycles == 1e9
    assert p.quality().eps_T == pytest.approx(0.55)


def test_dump_defaults_roundtrip(tmp_path):
    p = load_config(write(tmp_path, dump_defaults())).params
    assert p.h0 == pytest.approx(1e-5, rel=1e-12)
    assert replace(p, h0=1e-5) == ScenarioParams()
    again = load_config(write(tmp_path, yaml.safe_dump(params_to_mapping(p)))).params
    assert again == p


def test_partial_override_and_string_numbers(tmp_path):
    cfg = load_config(write(tmp_path, "task:\n  s_bits: 2e6\nuav:\n  theta: 1\nseed: 3\n"))
    assert cfg.params.s == 2e6 and cfg.params.theta == 1.0 and cfg.seed == 3
    assert cfg.params.gamma == 7.0


@pytest.mark.parametrize("body, field", [
    ({"uav": {"thetaa": 0.5}}, "uav.thetaa"),
    ({"uavs": {}}, "uavs"),
    ({"uav": {"theta": 2}}, "uav.theta"),
    ({"task": {"s_bits": "big"}}, "task.s_bits"),
    ({"fleet": {"n": 2.5}}, "fleet.n"),
    ({"quality": {"margin": 0.9}}, "quality.margin"),
    ({"task": {"c_cycles": 1e9, "cycles_per_bit": 10}}, "task"),
    ({"link": {"h0_db": -50, "h0_linear": 1e-5}}, "link"),
    ({"seed": "x"}, "seed"),
])
def test_bad_fields_are_named(tmp_path, body, field):
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        load_config(write(tmp_path, body))


def test_penalty_precondition_reported(tmp_path):
    with pytest.raises(ConfigError, match="rho"):
        load_config(write(tmp_path, {"uav": {"rho_s": 0.5}}))


def test_missing_file_and_bad_yaml(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nope.yaml"))
    with pytest.raises(ConfigError, match="parse"):
        load_config(write(tmp_path, "a: [1,\n"))


def test_per_uav_offsets(tmp_path):
    cfg = load_config(write(tmp_path, {"fleet": {"n": 3}, "link": {"offset_m": [10, 20, 30]}}))
    assert cfg.params.offsets == (10.0, 20.0, 30.0)
    with pytest.raises(ConfigError, match="offset"):
        load_config(write(tmp_path, {"fleet": {"n": 2}, "link": {"offset_m": [10, 20, 30]}}))


def test_expand_range():
    assert expand_range("v", {"start": 0.1, "stop": 0.5, "step": 0.1}) == (0.1, 0.2, 0.3, 0.4, 0.5)
    assert expand_range("v", [1, "2e0"]) == (1.0, 2.0)
    with pytest.raises(ConfigError, match="v.step"):
        expand_range("v", {"start": 0, "stop": 1, "step": 0})
    with pytest.raises(ConfigError):
        expand_range("v", {"start": 2, "stop": 1, "step": 0.5})


def test_parse_sweeps():
    (sw,) = parse_sweeps([{"param": "gamma", "values": [1, 2], "strategies": ["BO"],
                           "overrides": {"uav": {"theta": 1}}}])
    assert sw.label == "gamma" and sw.strategies == ("BO",)
    with pytest.raises(ConfigError, match=r"sweeps\[0\]"):
        parse_sweeps([{"param": "zeta", "values": [1]}])
    with pytest.raises(ConfigError, match="strategies"):
        SweepSpec("gamma", (1.0,), ("XX",))


def test_apply_param():
    p = ScenarioParams()
    assert apply_param(p, "n", 4).n == 4
    assert apply_param(p, "beta", 0.3) == p
    assert apply_param(p, "eps_T", 0.4).quality().eps_T == 0.4
    # eta moves the default threshold with it
    assert apply_param(p, "eta", 1.0).quality().eps_T == pytest.approx(0.9)
    with pytest.raises(ConfigError):
        apply_param(p, "n", 1.5)


def test_params_from_mapping_keeps_base():
    base = ScenarioParams(gamma=30)
    assert params_from_mapping({"uav": {"theta": 1}}, base).gamma == 30
