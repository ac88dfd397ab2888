from .base import RoundDiagnostics
from .hedge import ClippedHedge, HedgeStep, clipped_simplex_solve, kl_divergence
from .multi import LaggedOptOppm, MultiPredictorOptOppm, PredictorBank, loss_vector, multi_predictor_round
from .oppm import Oppm
from .optoppm import OptOppm

__all__ = [
    "ClippedHedge",
    "HedgeStep",
    "LaggedOptOppm",
    "MultiPredictorOptOppm",
    "Oppm",
    "OptOppm",
    "PredictorBank",
    "RoundDiagnostics",
    "clipped_simplex_solve",
    "kl_divergence",
    "loss_vector",
    "multi_predictor_round",
]
