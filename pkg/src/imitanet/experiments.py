"""Experiment commands. Each writes its artifacts under ``out`` and returns
the list of written paths relative to ``out``."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis as AN
from . import config as C
from . import svg
from .dynamics import SimConfig, imitation_graph, kappa_matrix, maximal_set, run, trajectory_rows
from .network import Network, barabasi_albert, write_edgelist
from .regression import fit_degree_model, fit_mean_model
from .topology import coevolve, component_diameters
from .trend import TrendConfig, run_trend, run_trend_batch, t1_star, t2_star, reversal_time


class Writer:
    """Tracks files written under one output directory."""

    def __init__(self, out: Path):
        self.out = Path(out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def path(self, rel: str) -> Path:
        p = self.out / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        self.files.append(rel)
        return p

    def text(self, rel: str, body: str) -> None:
        self.path(rel).write_text(body)

    def json(self, rel: str, obj) -> None:
        self.text(rel, json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n")

    def csv(self, rel: str, header, rows) -> None:
        with self.path(rel).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_cell(v) for v in r])


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"not serialisable: {type(o)}")


def _labels(vs) -> list[int]:
    return [int(v) + 1 for v in sorted(vs)]


def _target(x: np.ndarray, tol: float):
    """Name of the consensus strategy: ``e<k>`` at a vertex, else ``interior``."""
    mean = x.mean(axis=0)
    for k in range(x.shape[1]):
        if abs(mean[k] - 1) < tol:
            return f"e{k + 1}", mean
    return "interior", mean


def _strategy_svg(profiles: np.ndarray, title: str) -> str:
    t = np.arange(profiles.shape[0])
    series = [(t, profiles[:, i, k], k) for i in range(profiles.shape[1]) for k in range(profiles.shape[2])]
    return svg.line_plot(series, title=title, xlabel="t", ylabel="strategy coordinate")


# -- simulate -------------------------------------------------------------

def cmd_simulate(spec: dict, out: Path) -> list[str]:
    net, game = C.build_graph(spec), C.build_game(spec)
    x0 = C.build_profile(spec, net, game)
    cfg = C.build_sim(spec)
    tr = run(net, game, x0, cfg)
    w = Writer(out)
    every = int(spec.get("output", {}).get("csv_every", 1))
    header = ["t", "player"] + [f"strategy_{k}" for k in range(game.m)] + ["payoff"]
    w.csv("trajectory.csv", header, (r for r in trajectory_rows(tr) if r[0] % every == 0 or r[0] == tr.steps))
    w.text("imitation_graph.jsonl", tr.ig_jsonl())
    target, mean = _target(tr.final, cfg.consensus_tol)
    partition = AN.leader_partition(tr.final_ig)
    w.json("summary.json", {
        "steps": tr.steps,
        "converged": tr.converged,
        "imitation_graph_converged": tr.ig_converged,
        "consensus": tr.consensus,
        "consensus_target": target if tr.consensus else None,
        "mean_final_strategy": mean,
        "final_diameter": tr.diameter,
        "max_hull_violation": tr.max_hull_violation,
        "maximal_set": _labels(maximal_set(tr.final_ig)),
        "leader_partition": {str(v + 1): _labels(ls) for v, ls in partition.items()},
        "final_profile": tr.final,
    })
    w.text("strategies.svg", _strategy_svg(tr.profiles, f"{game.name} on n={net.n}"))
    return w.files


# -- coevolve -------------------------------------------------------------

def cmd_coevolve(spec: dict, out: Path) -> list[str]:
    net, game = C.build_graph(spec), C.build_game(spec)
    x0 = C.build_profile(spec, net, game)
    sim, evo = C.build_sim(spec), C.build_evo(spec)
    tr = coevolve(net, game, x0, sim, evo)
    w = Writer(out)
    for e, g in enumerate(tr.networks):
        write_edgelist(g, w.path(f"edges/epoch_{e:04d}.edges"))
    final = tr.final_network
    comps = final.components()
    diam = component_diameters(final, tr.final)
    w.json("coevolution.json", {
        "epochs": tr.manifest(),
        "num_epochs": tr.epochs,
        "stable": tr.stable,
        "strategy_converged": tr.strategy_converged,
        "steps": tr.steps,
        "is_clique_partition": final.is_clique_partition(),
        "max_hull_violation": tr.hull_violation,
        "components": [
            {"vertices": _labels(c), "size": len(c), "diameter": d, "consensus": d < sim.consensus_tol}
            for c, d in zip(comps, diam)
        ],
    })
    w.csv("final_profile.csv", ["player"] + [f"strategy_{k}" for k in range(game.m)],
          ([i + 1, *row] for i, row in enumerate(tr.final)))
    t = np.arange(len(tr.networks))
    w.text("edges.svg", svg.line_plot([(t, [g.num_edges for g in tr.networks], 0)],
                                      title="edges per epoch", xlabel="epoch", ylabel="edges"))
    return w.files


# -- trend ----------------------------------------------------------------

TREND_KEYS = {"params", "seeds", "alpha", "self_weight", "collapse_threshold", "horizon", "delta", "grid"}


def trend_config(sec: dict, n: int, **override) -> TrendConfig:
    C._kwargs(sec, TREND_KEYS, "trend")
    seeds = sec.get("seeds")
    if not seeds:
        raise C.ConfigError("trend needs a nonempty 'seeds' list (1-based)")
    seeds = {int(s) - 1 for s in seeds}
    if min(seeds) < 0 or max(seeds) >= n:
        raise C.ConfigError("trend seed label out of range")
    beta = override.pop("beta", None)
    params = C.build_trend_params(sec, **({"beta": beta} if beta is not None else {}))
    opts = {k: sec[k] for k in ("alpha", "self_weight", "collapse_threshold", "horizon", "delta") if k in sec}
    opts.update(override)
    return TrendConfig(params=params, seeds=frozenset(seeds), **opts)


def _closed_forms(net: Network, cfg: TrendConfig, trace) -> dict:
    p = cfg.params
    ok = (net.num_edges == net.n * (net.n - 1) // 2 and len(cfg.seeds) == 1
          and p.S0 == p.T0 == p.P0 == 0)
    if not ok:
        return {}
    out = {}
    seed = next(iter(cfg.seeds))
    rt = reversal_time(trace, seed)
    out["simulated_reversal_time"] = rt
    for name, fn in (("t1_star", lambda: t1_star(p, net.n)), ("t2_star", lambda: t2_star(p, net.n, cfg.alpha))):
        try:
            out[name] = fn()
        except ValueError as e:
            out[name] = None
            out[name + "_error"] = str(e)
    return out


def _write_trend(w: Writer, prefix: str, net: Network, cfg: TrendConfig) -> None:
    tr = run_trend(net, cfg)
    w.csv(prefix + "trend.csv", ["t", "player", "trend_probability"],
          ([t, i + 1, tr.density[t, i]] for t in range(tr.density.shape[0]) for i in range(net.n)))
    w.csv(prefix + "density.csv", ["t"] + [f"p{i + 1}" for i in range(net.n)],
          ([t, *row] for t, row in enumerate(tr.density)))
    summary = tr.summary()
    summary.update({"beta": cfg.params.beta, "alpha": cfg.alpha, "seeds": _labels(cfg.seeds)})
    summary.update(_closed_forms(net, cfg, tr))
    w.json(prefix + "summary.json", summary)
    w.text(prefix + "density.svg", svg.heatmap(tr.density, title=f"trend density beta={cfg.params.beta} alpha={cfg.alpha}"))
    t = np.arange(len(tr.pi))
    w.text(prefix + "pi.svg", svg.line_plot([(t, tr.pi, 0), (t, tr.density.max(axis=1), 1)],
                                            title="saturation proportion (blue) and max trend probability (red)",
                                            ylabel="proportion"))


def cmd_trend(spec: dict, out: Path) -> list[str]:
    net = C.build_graph(spec)
    sec = C._section(spec, "trend")
    w = Writer(out)
    grid = sec.get("grid")
    if grid is None:
        _write_trend(w, "", net, trend_config(sec, net.n))
        return w.files
    base = {k: v for k, v in sec.items() if k != "grid"}
    for beta in grid.get("beta", [None]):
        for alpha in grid.get("alpha", [None]):
            over = {}
            if beta is not None:
                over["beta"] = beta
            if alpha is not None:
                over["alpha"] = alpha
            cfg = trend_config(base, net.n, **over)
            _write_trend(w, f"beta{cfg.params.beta}_alpha{cfg.alpha}/", net, cfg)
    return w.files


# -- sweep ----------------------------------------------------------------

def _sweep_task(args):
    n, m, seed, g, params, betas, alphas, opts = args
    net = barabasi_albert(n, m, seed=C.stream(seed, g, C.GRAPH_STREAM))
    rows = []
    for beta in betas:
        p = replace(params, beta=float(beta))
        for alpha in alphas:
            cfg = TrendConfig(params=p, alpha=float(alpha), **opts)
            best, _ = run_trend_batch(net, cfg, [{v} for v in range(n)])
            rows.extend((g, v, int(net.degrees[v]), float(beta), float(alpha), float(best[v])) for v in range(n))
    return rows


def saturation_sweep(params, graphs: int, n: int, m: int, betas, alphas, seed: int,
                     workers: int = 1, **opts) -> list[tuple]:
    """Max saturation for every (graph, seed vertex, beta, alpha).

    Graph ``g`` is drawn from stream ``(seed, g)``. Rows come back in
    (graph, beta, alpha, vertex) order whatever ``workers`` is.
    """
    tasks = [(n, m, seed, g, params, list(betas), list(alphas), opts) for g in range(graphs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_sweep_task, tasks))
    else:
        parts = [_sweep_task(t) for t in tasks]
    return [r for part in parts for r in part]


def mean_table(rows) -> list[tuple[float, float, float]]:
    acc: dict[tuple[float, float], list[float]] = {}
    for _, _, _, b, a, pi in rows:
        acc.setdefault((b, a), []).append(pi)
    return [(b, a, float(np.mean(v))) for (b, a), v in sorted(acc.items())]


SWEEP_KEYS = {"graphs", "n", "m", "beta", "alpha", "params", "horizon", "collapse_threshold",
              "self_weight", "fits", "workers"}


def _grid(v, name):
    if isinstance(v, dict):
        lo, hi, step = v["from"], v["to"], v["step"]
        return [round(x, 10) for x in np.arange(lo, hi + step / 2, step)]
    if isinstance(v, list) and v:
        return v
    raise C.ConfigError(f"sweep.{name} must be a nonempty list or {{from, to, step}}")


def cmd_sweep(spec: dict, out: Path) -> list[str]:
    sec = C._kwargs(C._section(spec, "sweep"), SWEEP_KEYS, "sweep")
    seed = C.require_seed(spec, "a sweep")
    betas, alphas = _grid(sec.get("beta"), "beta"), _grid(sec.get("alpha"), "alpha")
    params = C.build_trend_params({"params": {**sec.get("params", {}), "beta": betas[0]}})
    opts = {k: sec[k] for k in ("horizon", "collapse_threshold", "self_weight") if k in sec}
    rows = saturation_sweep(params, int(sec.get("graphs", 20)), int(sec.get("n", 100)), int(sec.get("m", 2)),
                            betas, alphas, seed, int(sec.get("workers", 1)), **opts)
    w = Writer(out)
    w.csv("saturation.csv", ["graph", "seed_vertex", "degree", "beta", "alpha", "max_pi"],
          ((g, v + 1, d, b, a, pi) for g, v, d, b, a, pi in rows))
    means = mean_table(rows)
    w.csv("mean_saturation.csv", ["beta", "alpha", "mean_pi"], means)
    fits = sec.get("fits", ["degree", "mean"])
    if "degree" in fits:
        arr = np.array([(d, pi) for _, _, d, _, _, pi in rows], dtype=float)
        res = fit_degree_model(arr[:, 0], arr[:, 1])
        w.json("regression_degree.json", res.to_dict())
        w.csv("residuals_degree.csv", ["residual"], ([r] for r in res.residuals))
    if "mean" in fits:
        m = np.array(means, dtype=float)
        res = fit_mean_model(m[:, 0], m[:, 1], m[:, 2])
        w.json("regression_mean.json", res.to_dict())
        w.csv("residuals_mean.csv", ["residual"], ([r] for r in res.residuals))
    if len(betas) > 1 and len(alphas) > 1:
        grid = np.array([[mp for b, a, mp in means if b == bb] for bb in sorted(set(b for b, _, _ in means))])
        w.text("mean_saturation.svg", svg.heatmap(grid, title="mean saturation", xlabel="alpha", ylabel="beta (downward)"))
    return w.files


# -- analyze --------------------------------------------------------------

ANALYZE_KEYS = {"maximal_set", "rhs_hull", "parameter", "run"}


def _family(spec: dict, net: Network, game, x: np.ndarray):
    """Numeric and sympy profiles with every non-leader at ``(s, 1 - s)``."""
    sec = C._section(spec, "profile")
    if game.m != 2 or sec.get("preset") not in ("leaders-e1", "leaders-e2"):
        raise C.ConfigError("analyze.parameter needs a two-strategy game and a leader preset")
    leaders = C.leaders_of(sec, net.n)
    others = [i for i in range(net.n) if i not in leaders]

    def fam(s):
        y = x.copy()
        y[others] = (s, 1 - s)
        return y

    def sym(s):
        import sympy as sp

        rows = [[sp.Integer(int(v)) for v in x[i]] if i in leaders else [s, 1 - s] for i in range(net.n)]
        return rows

    return fam, sym


def q_history(net: Network, game, tr, alpha: float, delta: float = 0.0):
    """Leading blocks of the imitation matrices after the last imitation-graph change.

    Rows and columns follow that graph's topological order, so every block
    is strictly upper triangular.
    """
    t0, ig = tr.ig_changes[-1]
    order = list(ig.order)
    fam = []
    for x in tr.profiles[t0: tr.steps]:
        k = kappa_matrix(net, game, x, delta)[np.ix_(order, order)]
        fam.append(k[:-1, :-1])
    return fam, t0


def cmd_analyze(spec: dict, out: Path) -> list[str]:
    net, game = C.build_graph(spec), C.build_game(spec)
    x = C.build_profile(spec, net, game)
    sec = C._kwargs(C._section(spec, "analyze"), ANALYZE_KEYS, "analyze")
    rhs_hull = sec.get("rhs_hull", "all")
    ig = imitation_graph(net, game, x)
    if "maximal_set" in sec:
        vstar = [int(v) - 1 for v in sec["maximal_set"]]
    elif C._section(spec, "profile").get("preset") in ("leaders-e1", "leaders-e2"):
        vstar = C.leaders_of(C._section(spec, "profile"), net.n)
    else:
        vstar = maximal_set(ig)
    rec = AN.max_min_condition(net, game, x, vstar, rhs_hull=rhs_hull)
    report = {"max_min": rec.to_dict(), "leader_partition":
              {str(v + 1): _labels(ls) for v, ls in AN.leader_partition(ig).items()}}

    par = sec.get("parameter")
    if par:
        import sympy as sp

        name = par.get("name", "a")
        fam, sym = _family(spec, net, game, x)
        s = sp.Symbol(name)
        lhs, rhs, roots = AN.symbolic_reduction(net, game, rec, sym(s), s)
        lo, hi = float(par.get("lo", 0.0)), float(par.get("hi", 1.0))
        sym_report = {"symbol": name, "lhs": str(lhs), "rhs": str(rhs),
                      "roots": [str(r) for r in roots], "roots_numeric": [float(sp.N(r, 30)) for r in roots if r.is_real]}
        try:
            b = AN.condition_boundary(net, game, fam, vstar, lo, hi, rhs_hull=rhs_hull)
            eps = float(par.get("flip_eps", 1e-6))
            below = AN.max_min_condition(net, game, fam(b - eps), vstar, rhs_hull).holds
            above = AN.max_min_condition(net, game, fam(b + eps), vstar, rhs_hull).holds
            sym_report.update({"boundary": b, "holds_below": below, "holds_above": above, "flips": below != above})
        except ValueError as e:
            sym_report["boundary_error"] = str(e)
        report["parameter"] = sym_report

    w = Writer(out)
    if sec.get("run"):
        cfg = SimConfig(**C._kwargs(sec["run"], C.SIM_KEYS, "analyze.run"))
        tr = run(net, game, x, cfg)
        fam, t0 = q_history(net, game, tr, cfg.alpha, cfg.delta)
        decay = {"from_step": t0, "length": len(fam)}
        if len(fam) > net.n and net.n > 1:
            r = AN.verify_product_decay(fam, cfg.alpha)
            decay.update({"norm": r.norm, "bound": r.bound, "binomial_bound": r.binomial_bound,
                          "applicable": r.applicable, "nilpotent": r.nilpotent, "ok": r.ok})
        else:
            decay["note"] = "too few steps with a fixed imitation graph"
        report["product_decay"] = decay
        report["run"] = {"steps": tr.steps, "consensus": tr.consensus, "final_diameter": tr.diameter}
        en = [AN.energy(net, game, xt, cfg.delta) for xt in tr.profiles]
        w.csv("energy.csv", ["t", "energy"], enumerate(en))
        w.text("energy.svg", svg.line_plot([(np.arange(len(en)), en, 0)], title="energy", ylabel="energy"))
    w.json("analysis.json", report)
    return w.files


COMMANDS = {
    "simulate": cmd_simulate,
    "coevolve": cmd_coevolve,
    "trend": cmd_trend,
    "sweep": cmd_sweep,
    "analyze": cmd_analyze,
}
