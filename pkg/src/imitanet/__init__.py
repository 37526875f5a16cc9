"""Imitation dynamics, network co-evolution and trend cascades on graphs."""

__version__ = "0.1.0"

from .dynamics import NumericFailure, SimConfig, Trajectory, run, step  # noqa: E402
from .games import Game, TrendParams, chicken, prisoners_dilemma, rps, stag_hunt  # noqa: E402
from .network import Network, barabasi_albert, complete, cycle, karate_club  # noqa: E402

__all__ = [
    "Game",
    "Network",
    "NumericFailure",
    "SimConfig",
    "Trajectory",
    "TrendParams",
    "barabasi_albert",
    "chicken",
    "complete",
    "cycle",
    "karate_club",
    "prisoners_dilemma",
    "rps",
    "run",
    "stag_hunt",
    "step",
]
