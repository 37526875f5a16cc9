"""Experiment configuration: JSON parsing, validation and object builders.

Random streams come from numpy's PCG64 generator. Each stream is seeded by
``SeedSequence(master_seed, spawn_key=(run_index, purpose))`` so any run can
be regenerated on its own on any platform.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import games as G
from . import network as N
from .dynamics import SimConfig
from .topology import EvolutionConfig

COMMANDS = ("simulate", "coevolve", "trend", "sweep", "analyze")
GRAPH_STREAM, PROFILE_STREAM = 0, 1


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


def stream(seed: int, run_index: int = 0, purpose: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(run_index, purpose)))


def load(path: str | Path) -> dict:
    path = Path(path)
    try:
        spec = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    if not isinstance(spec, dict):
        raise ConfigError("config must be a JSON object")
    spec.setdefault("base_dir", str(path.parent.resolve()))
    return spec


def resolve(spec: dict, command: str, seed: int | None = None) -> dict:
    """Merge CLI overrides and check the command matches."""
    spec = dict(spec)
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    given = spec.get("command", command)
    if given != command:
        raise ConfigError(f"config is for {given!r} but command is {command!r}")
    spec["command"] = command
    if seed is not None:
        spec["seed"] = seed
    s = spec.get("seed")
    if s is not None and (not isinstance(s, int) or isinstance(s, bool) or not 0 <= s < 2**64):
        raise ConfigError("seed must be an unsigned 64-bit integer")
    return spec


def require_seed(spec: dict, what: str) -> int:
    if spec.get("seed") is None:
        raise ConfigError(f"a seed is required for {what}")
    return spec["seed"]


def _path(spec: dict, p: str) -> Path:
    p = Path(p)
    return p if p.is_absolute() else Path(spec.get("base_dir", ".")) / p


def _section(spec: dict, key: str) -> dict:
    sec = spec.get(key, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"{key!r} must be an object")
    return sec


def _kwargs(sec: dict, allowed: set, where: str) -> dict:
    extra = set(sec) - allowed
    if extra:
        raise ConfigError(f"unknown {where} option(s): {sorted(extra)}")
    return dict(sec)


def build_graph(spec: dict, run_index: int = 0) -> N.Network:
    sec = _section(spec, "graph")
    has_gen, has_file = "generator" in sec, "edgelist" in sec
    if has_gen == has_file:
        raise ConfigError("graph needs exactly one of 'generator' or 'edgelist'")
    if has_file:
        try:
            return N.read_edgelist(_path(spec, sec["edgelist"]), sec.get("n"))
        except OSError as e:
            raise ConfigError(f"cannot read edge list: {e}") from e
    gen = sec["generator"]
    args = {k: v for k, v in sec.items() if k != "generator"}
    simple = {"complete": N.complete, "cycle": N.cycle, "path": N.path}
    try:
        if gen == "karate_club":
            _kwargs(args, set(), "karate_club")
            return N.karate_club()
        if gen in simple:
            _kwargs(args, {"n"}, gen)
            return simple[gen](int(args["n"]))
        if gen == "star":
            _kwargs(args, {"leaves"}, gen)
            return N.star(int(args["leaves"]))
        if gen == "barabasi_albert":
            _kwargs(args, {"n", "m"}, gen)
            seed = require_seed(spec, "a random graph")
            return N.barabasi_albert(int(args["n"]), int(args.get("m", 2)),
                                     seed=stream(seed, run_index, GRAPH_STREAM))
    except KeyError as e:
        raise ConfigError(f"graph generator {gen!r} is missing {e}") from e
    raise ConfigError(f"unknown graph generator {gen!r}")


def build_game(spec: dict) -> G.Game:
    sec = _section(spec, "game")
    if "matrix" in sec:
        return G.Game(sec["matrix"], name=sec.get("name", "custom"))
    name = sec.get("name")
    args = {k: v for k, v in sec.items() if k != "name"}
    makers = {
        "prisoners_dilemma": (G.prisoners_dilemma, {"R", "S", "T", "P"}),
        "stag_hunt": (G.stag_hunt, {"hare"}),
        "chicken": (G.chicken, set()),
        "rps": (G.rps, {"a"}),
    }
    if name not in makers:
        raise ConfigError(f"unknown game {name!r}")
    fn, allowed = makers[name]
    try:
        return fn(**_kwargs(args, allowed, name))
    except TypeError as e:
        raise ConfigError(f"bad parameters for {name}: {e}") from e


def random_profile(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """Coordinates drawn uniformly on [0, 1) then normalised to the simplex."""
    x = rng.random((n, m))
    return x / x.sum(axis=1, keepdims=True)


def _vertex(m: int, k: int) -> np.ndarray:
    e = np.zeros(m)
    e[k] = 1.0
    return e


def _fill(value, n_rows: int, m: int, rng_fn, where: str) -> np.ndarray:
    if isinstance(value, str):
        if value == "random":
            return random_profile(rng_fn(), n_rows, m)
        if value.startswith("e") and value[1:].isdigit() and 1 <= int(value[1:]) <= m:
            return np.tile(_vertex(m, int(value[1:]) - 1), (n_rows, 1))
        raise ConfigError(f"unknown {where} value {value!r}")
    v = np.asarray(value, dtype=float)
    if v.shape != (m,):
        raise ConfigError(f"{where} strategy must have {m} entries")
    return np.tile(v, (n_rows, 1))


def build_profile(spec: dict, net: N.Network, game: G.Game, run_index: int = 0) -> np.ndarray:
    sec = _section(spec, "profile")
    preset = sec.get("preset", "random")
    n, m = net.n, game.m

    def rng():
        return stream(require_seed(spec, "a random profile"), run_index, PROFILE_STREAM)

    if preset == "random":
        return random_profile(rng(), n, m)
    if preset == "file":
        p = _path(spec, sec["path"])
        try:
            text = p.read_text()
        except OSError as e:
            raise ConfigError(f"cannot read profile: {e}") from e
        x = np.array(json.loads(text), dtype=float) if p.suffix == ".json" else np.loadtxt(p, delimiter=",", ndmin=2)
        if x.shape != (n, m):
            raise ConfigError(f"profile has shape {x.shape}, expected {(n, m)}")
        return x
    if preset in ("leaders-e1", "leaders-e2"):
        leaders = leaders_of(sec, n)
        others = [i for i in range(n) if i not in leaders]
        x = np.zeros((n, m))
        x[leaders] = _vertex(m, 0 if preset == "leaders-e1" else 1)
        x[others] = _fill(sec.get("others", "random"), len(others), m, rng, "profile.others")
        return x
    raise ConfigError(f"unknown profile preset {preset!r}")


def leaders_of(sec: dict, n: int) -> list[int]:
    """0-based leader indices from 1-based labels."""
    labels = sec.get("leaders")
    if not labels:
        raise ConfigError("leader presets need a nonempty 'leaders' list (1-based)")
    out = sorted({int(v) - 1 for v in labels})
    if out[0] < 0 or out[-1] >= n:
        raise ConfigError("leader label out of range")
    return out


SIM_KEYS = {"alpha", "delta", "horizon", "consensus_tol", "ig_window", "conv_tol", "conv_window", "stop_at_consensus"}


def build_sim(spec: dict) -> SimConfig:
    sec = _kwargs(_section(spec, "sim"), SIM_KEYS, "sim")
    return SimConfig(**sec)


def build_evo(spec: dict) -> EvolutionConfig:
    return EvolutionConfig(**_kwargs(_section(spec, "evo"), {"tau", "max_epochs"}, "evo"))


TREND_PARAM_KEYS = {"R", "S", "T", "P", "beta", "S0", "T0", "P0", "exponent_sign"}


def build_trend_params(sec: dict, **override) -> G.TrendParams:
    params = _kwargs(sec.get("params", {}), TREND_PARAM_KEYS, "trend.params")
    params.update(override)
    try:
        return G.TrendParams(**params)
    except TypeError as e:
        raise ConfigError(f"trend params incomplete: {e}") from e
