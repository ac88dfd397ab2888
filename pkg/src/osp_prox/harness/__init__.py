"""Experiment runner, output writers and command-line interface."""

from .config import ExperimentConfig
from .output import render_svg, write_csv
from .rng import SplitMix64, initial_pair
from .runner import ExperimentResult, RoundRecord, run_experiment

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "RoundRecord",
    "SplitMix64",
    "initial_pair",
    "render_svg",
    "run_experiment",
    "write_csv",
]
