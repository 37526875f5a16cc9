import json
from pathlib import Path

import numpy as np
import pytest

from imitanet import cli, config as C
from imitanet.dynamics import NumericFailure

DEMOS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def write(tmp_path, spec, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(spec))
    return str(p)


def run_cli(tmp_path, command, spec, out="out", seed=None):
    args = [command, "--config", write(tmp_path, spec), "--out", str(tmp_path / out)]
    if seed is not None:
        args += ["--seed", str(seed)]
    return cli.main(args)


def tree(path):
    return {str(p.relative_to(path)): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()}


SIM = {"graph": {"generator": "karate_club"}, "game": {"name": "stag_hunt"},
       "profile": {"preset": "leaders-e1", "leaders": [1, 34], "others": "random"},
       "sim": {"alpha": 0.1, "horizon": 400}}


def test_simulate_outputs_and_manifest(tmp_path):
    assert run_cli(tmp_path, "simulate", SIM, seed=7) == 0
    out = tmp_path / "out"
    man = json.loads((out / "manifest.json").read_text())
    assert man["command"] == "simulate" and man["seed"] == 7
    assert set(man["files"]) == {"trajectory.csv", "imitation_graph.jsonl", "summary.json", "strategies.svg"}
    header = (out / "trajectory.csv").read_text().split("\n")[0]
    assert header == "t,player,strategy_0,strategy_1,payoff"
    summary = json.loads((out / "summary.json").read_text())
    assert summary["consensus"] and summary["consensus_target"] == "e1"
    first = json.loads((out / "imitation_graph.jsonl").read_text().split("\n")[0])
    assert first["t"] == 0 and "edges" in first and "order" in first


def test_byte_reproducible(tmp_path):
    for command, spec in [("simulate", SIM),
                          ("coevolve", {**SIM, "game": {"name": "prisoners_dilemma", "R": 8, "S": -4, "T": 10, "P": 2},
                                        "profile": {"preset": "random"}, "evo": {"tau": 25, "max_epochs": 20}}),
                          ("trend", {"graph": {"generator": "barabasi_albert", "n": 40, "m": 2},
                                     "trend": {"params": {"R": 1, "S": 0, "T": 2, "P": 3, "beta": 0.9},
                                               "seeds": [1], "horizon": 100}})]:
        assert run_cli(tmp_path, command, spec, out=f"{command}_a", seed=3) == 0
        assert run_cli(tmp_path, command, spec, out=f"{command}_b", seed=3) == 0
        assert tree(tmp_path / f"{command}_a") == tree(tmp_path / f"{command}_b")


def test_seed_changes_random_output(tmp_path):
    run_cli(tmp_path, "simulate", SIM, out="a", seed=1)
    run_cli(tmp_path, "simulate", SIM, out="b", seed=2)
    assert (tmp_path / "a" / "trajectory.csv").read_bytes() != (tmp_path / "b" / "trajectory.csv").read_bytes()


@pytest.mark.parametrize("spec,command", [
    ({**SIM}, "simulate"),  # random profile without a seed
    ({**SIM, "graph": {}}, "simulate"),
    ({**SIM, "graph": {"generator": "karate_club", "edgelist": "x"}}, "simulate"),
    ({**SIM, "game": {"name": "prisoners_dilemma", "R": 1, "S": 2, "T": 3, "P": 4}}, "simulate"),
    ({**SIM, "game": {"name": "poker"}}, "simulate"),
    ({**SIM, "sim": {"alpha": 2}}, "simulate"),
    ({**SIM, "sim": {"speed": 2}}, "simulate"),
    ({**SIM, "command": "trend"}, "simulate"),
    ({"graph": {"generator": "complete", "n": 5}, "trend": {"params": {"R": 1, "S": 0, "T": 2, "P": 3, "beta": 0.9}}},
     "trend"),
    ({"sweep": {"graphs": 1, "beta": [0.9], "alpha": [0.1], "params": {"R": 1, "S": 0, "T": 2, "P": 3}}}, "sweep"),
    ({**SIM, "graph": {"edgelist": "missing.edges"}}, "simulate"),
])
def test_input_errors_exit_one(tmp_path, spec, command):
    assert run_cli(tmp_path, command, spec) == 1


def test_bad_json_exits_one(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    assert cli.main(["simulate", "--config", str(p)]) == 1
    assert cli.main(["simulate", "--config", str(tmp_path / "absent.json")]) == 1


def test_usage_errors_exit_one(tmp_path):
    for argv in (["explode", "--config", "x.json"], ["simulate"], ["simulate", "--config", "x", "--seed", "abc"]):
        with pytest.raises(SystemExit) as e:
            cli.main(argv)
        assert e.value.code == 1


def test_negative_seed_exits_one(tmp_path):
    assert run_cli(tmp_path, "simulate", SIM, seed=-1) == 1
    assert run_cli(tmp_path, "simulate", SIM, seed=2**64) == 1


def test_numeric_failure_exits_two(tmp_path, monkeypatch):
    def boom(spec, out):
        raise NumericFailure("left the simplex")

    monkeypatch.setitem(cli.RUNNERS, "simulate", boom)
    assert run_cli(tmp_path, "simulate", SIM, seed=1) == 2


def test_edgelist_graph_and_file_profile(tmp_path):
    (tmp_path / "g.edges").write_text("# n 3\n1 2\n2 3\n")
    (tmp_path / "x.json").write_text(json.dumps([[0, 1], [1, 0], [0, 1]]))
    spec = {"graph": {"edgelist": "g.edges"}, "game": {"name": "prisoners_dilemma", "R": 3, "S": -1, "T": 5, "P": 2},
            "profile": {"preset": "file", "path": "x.json"}, "sim": {"alpha": 0.1, "horizon": 1}}
    assert run_cli(tmp_path, "simulate", spec) == 0
    rows = (tmp_path / "out" / "trajectory.csv").read_text().split("\n")
    assert rows[1] == "0,1,0.0,1.0,5.0"
    assert rows[5].startswith("1,2,0.9")


def test_coevolve_outputs(tmp_path):
    spec = {**SIM, "game": {"name": "rps", "a": 0}, "profile": {"preset": "random"}, "evo": {"tau": 25, "max_epochs": 2}}
    assert run_cli(tmp_path, "coevolve", spec, seed=5) == 0
    out = tmp_path / "out"
    report = json.loads((out / "coevolution.json").read_text())
    assert report["epochs"][1]["edges"] == 0 and report["is_clique_partition"]
    assert (out / "edges" / "epoch_0000.edges").exists()


def test_trend_grid_outputs(tmp_path):
    spec = {"graph": {"generator": "complete", "n": 20},
            "trend": {"params": {"R": 1, "S": 0, "T": 2, "P": 3}, "seeds": [1], "horizon": 150,
                      "grid": {"beta": [0.85, 0.95], "alpha": [0.1, 0.25]}}}
    assert run_cli(tmp_path, "trend", spec) == 0
    dirs = sorted(p.name for p in (tmp_path / "out").iterdir() if p.is_dir())
    assert dirs == ["beta0.85_alpha0.1", "beta0.85_alpha0.25", "beta0.95_alpha0.1", "beta0.95_alpha0.25"]
    s = json.loads((tmp_path / "out" / dirs[0] / "summary.json").read_text())
    assert {"max_pi", "collapse_time", "tau", "t1_star", "simulated_reversal_time"} <= set(s)
    dens = np.loadtxt(tmp_path / "out" / dirs[0] / "density.csv", delimiter=",", skiprows=1)
    assert dens.shape[1] == 21


def test_sweep_outputs_and_parallel_merge(tmp_path):
    spec = {"sweep": {"graphs": 2, "n": 30, "m": 2, "beta": [0.8, 0.9], "alpha": [0.1, 0.2],
                      "params": {"R": 1, "S": 0, "T": 2, "P": 3}, "horizon": 500}}
    assert run_cli(tmp_path, "sweep", spec, out="serial", seed=9) == 0
    par = {"sweep": {**spec["sweep"], "workers": 2}}
    assert run_cli(tmp_path, "sweep", par, out="parallel", seed=9) == 0
    for f in ("saturation.csv", "regression_degree.json", "regression_mean.json"):
        assert (tmp_path / "serial" / f).read_bytes() == (tmp_path / "parallel" / f).read_bytes()
    reg = json.loads((tmp_path / "serial" / "regression_mean.json").read_text())
    res = np.loadtxt(tmp_path / "serial" / "residuals_mean.csv", skiprows=1)
    y = np.loadtxt(tmp_path / "serial" / "mean_saturation.csv", delimiter=",", skiprows=1)[:, 2]
    assert reg["r_squared"] == pytest.approx(1 - (res ** 2).sum() / ((y - y.mean()) ** 2).sum(), abs=1e-12)
    rows = (tmp_path / "serial" / "saturation.csv").read_text().strip().split("\n")
    assert len(rows) == 1 + 2 * 30 * 4


def test_analyze_reports(tmp_path):
    spec = json.loads((DEMOS / "analyze_e1.json").read_text())
    assert run_cli(tmp_path, "analyze", spec) == 0
    rep = json.loads((tmp_path / "out" / "analysis.json").read_text())
    assert rep["max_min"]["holds"] and rep["parameter"]["roots"] == ["5/6"]
    assert rep["parameter"]["lhs"] == "16*(3*a - 1)" and rep["parameter"]["rhs"] == "24"
    energy = np.loadtxt(tmp_path / "out" / "energy.csv", delimiter=",", skiprows=1)
    assert np.all(energy[:, 1] >= 0)
    spec["profile"]["others"] = [0.8, 0.2]
    assert run_cli(tmp_path, "analyze", spec, out="low") == 0
    assert not json.loads((tmp_path / "low" / "analysis.json").read_text())["max_min"]["holds"]


def test_analyze_consensus_energy_zero(tmp_path):
    spec = {"graph": {"generator": "karate_club"}, "game": {"name": "stag_hunt"},
            "profile": {"preset": "leaders-e1", "leaders": [1], "others": "e1"},
            "analyze": {"run": {"alpha": 0.1, "horizon": 10}}}
    assert run_cli(tmp_path, "analyze", spec) == 0
    energy = np.loadtxt(tmp_path / "out" / "energy.csv", delimiter=",", skiprows=1, ndmin=2)
    assert np.all(energy[:, 1] == 0)


def test_streams_are_independent_and_stable():
    a = C.stream(1, 0, 0).random(3)
    assert np.array_equal(a, C.stream(1, 0, 0).random(3))
    assert not np.array_equal(a, C.stream(1, 1, 0).random(3))
    assert not np.array_equal(a, C.stream(1, 0, 1).random(3))


def test_demo_configs_parse():
    for p in DEMOS.glob("*.json"):
        spec = C.load(p)
        C.resolve(spec, spec["command"])
