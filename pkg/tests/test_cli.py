import json

import pytest
import yaml

from hmtd.cli import main


def cfg(tmp_path, body):
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(body))
    return str(path)


def test_optimize_text(capsys):
    assert main(["optimize"]) == 0
    out = capsys.readouterr().out
    assert "PO" in out and "balanced" in out and "[error > eps_T]" in out


def test_optimize_json(capsys):
    assert main(["optimize", "--json", "-s", "BO"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert list(data) == ["BO"]
    assert data["BO"]["uavs"][0]["breakdown"]["gamma_B"] == pytest.approx(6.460581334791291)


def test_optimize_no_optimum_exit_code(tmp_path, capsys):
    path = cfg(tmp_path, {"task": {"gamma": 30}, "quality": {"eps_T": 0.3}})
    assert main(["optimize", "-c", path]) == 3
    assert "no optimum" in capsys.readouterr().out


def test_config_error_exit_code(tmp_path, capsys):
    path = cfg(tmp_path, {"uav": {"theta": 3}})
    assert main(["optimize", "-c", path]) == 1
    assert "uav.theta" in capsys.readouterr().err


def test_sweep_writes_csv_json_png(tmp_path, capsys):
    path = cfg(tmp_path, {"sweeps": [
        {"name": "g", "param": "gamma", "values": [1, 5, 9]},
        {"name": "f", "param": "F", "values": [5e9, 10e9], "strategies": ["BO"]},
    ]})
    out = tmp_path / "out"
    assert main(["sweep", "-c", path, "-o", str(out), "--plot", "--only", "g"]) == 0
    assert (out / "g.csv").read_text().startswith("param_value,strategy,")
    assert (out / "g.json").exists()
    assert (out / "g.png").read_bytes()[:4] == b"\x89PNG"
    assert not (out / "f.csv").exists()
    assert main(["sweep", "-c", path, "--only", "zzz"]) == 1


def test_sweep_needs_sweeps(tmp_path):
    assert main(["sweep", "-c", cfg(tmp_path, {"seed": 1})]) == 1


def test_certify_output(tmp_path):
    out = tmp_path / "cert.json"
    assert main(["certify", "-n", "5", "--seed", "2", "-r", "1e-3", "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ok"] and rep["draws"] == 5 and rep["seed"] == 2


def test_defaults_loads_back(tmp_path, capsys):
    out = tmp_path / "d.yaml"
    assert main(["defaults", "-o", str(out)]) == 0
    assert main(["optimize", "-c", str(out), "-s", "TL"]) == 0
