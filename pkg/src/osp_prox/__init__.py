"""Proximal point methods for online saddle point problems.

Three learners (OPPM, OptOPPM and its multi-predictor variant) play a
repeated convex-concave game against a stream of payoffs; the package
also ships the duality-gap / Nash-regret metrics, closed-form and
iterative prox solvers, and the synthetic payoff streams used to
benchmark them.
"""

from .algorithms import (
    ClippedHedge,
    LaggedOptOppm,
    MultiPredictorOptOppm,
    Oppm,
    OptOppm,
    clipped_simplex_solve,
)
from .environments import Environment
from .errors import OspError
from .geometry import BoxSet, SquareNormRegularizer
from .harness import ExperimentConfig, run_experiment
from .inner_solvers import ProxProblem, solve_joint_prox
from .metrics import MetricsAccumulator
from .payoffs import QuadraticPayoff, QuadraticSaddle, SeparableSaddle

__version__ = "0.1.0"

__all__ = [
    "BoxSet",
    "ClippedHedge",
    "Environment",
    "ExperimentConfig",
    "LaggedOptOppm",
    "MetricsAccumulator",
    "MultiPredictorOptOppm",
    "Oppm",
    "OptOppm",
    "OspError",
    "ProxProblem",
    "QuadraticPayoff",
    "QuadraticSaddle",
    "SeparableSaddle",
    "SquareNormRegularizer",
    "clipped_simplex_solve",
    "run_experiment",
    "solve_joint_prox",
]
