"""The emit -> reveal -> observe experiment loop."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from ..algorithms import LaggedOptOppm, MultiPredictorOptOppm, Oppm
from ..environments import Environment
from ..errors import ConfigError, InnerSolveError
from ..invariants import InvariantLog
from ..metrics import MetricsAccumulator, RoundIncrements, Snapshot
from .config import ExperimentConfig
from .rng import initial_pair


@dataclass
class RoundRecord:
    t: int
    x: object
    y: object
    x_br: object
    y_br: object
    dgap_avg: float
    nereg_avg: Optional[float]
    reg1_avg: float
    reg2_avg: float
    path: float
    vt: Optional[float]
    eta: float
    gamma: float
    stage: tuple
    doubled: bool
    weights: Optional[tuple] = None
    # not part of the CSV schema
    dgap_inc: float = 0.0


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list
    final: Snapshot
    totals: dict
    last_increments: RoundIncrements
    invariants: InvariantLog
    doublings: int
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return self.invariants.total

    def record_at(self, t: int) -> RoundRecord:
        for r in self.records:
            if r.t == t:
                return r
        raise KeyError(f"no record at round {t}")


def make_environment(cfg: ExperimentConfig) -> Environment:
    try:
        return Environment(cfg.environment, saddle=cfg.saddle, saddles=cfg.saddles)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


def make_algorithm(cfg: ExperimentConfig, env: Environment, log: InvariantLog):
    if cfg.init is not None:
        x0, y0 = env.box_x.project(float(cfg.init[0])), env.box_y.project(float(cfg.init[1]))
    else:
        x0, y0 = initial_pair(cfg.seed, env.box_x, env.box_y)
    bx, by = env.box_x, env.box_y
    if cfg.algorithm == "oppm":
        return Oppm(bx, by, x0, y0, cfg.epsilon, cfg.C, cfg.inner_tol, log)
    if cfg.algorithm == "optoppm":
        return LaggedOptOppm(bx, by, x0, y0, cfg.effective_lags[0], cfg.epsilon, cfg.C1, cfg.C2,
                             cfg.inner_tol, log)
    return MultiPredictorOptOppm(bx, by, x0, y0, cfg.effective_lags, cfg.epsilon, cfg.C1, cfg.C2,
                                 cfg.effective_T_guess, cfg.inner_tol, log)


def checkpoint_rounds(T: int, stride: int) -> set:
    """Every power of ten, every ``stride`` rounds, and the last round."""
    pts = {T}
    p = 1
    while p <= T:
        pts.add(p)
        p *= 10
    pts.update(range(stride, T + 1, stride))
    return pts


def run_experiment(cfg: ExperimentConfig, strict: bool = False) -> ExperimentResult:
    """Run ``cfg.rounds`` rounds and collect the checkpoint trace.

    The same payoff and the same best responses feed both the metrics and
    the algorithm. With ``strict`` the first invariant breach raises.
    """
    env = make_environment(cfg)
    log = InvariantLog(strict=strict)
    algo = make_algorithm(cfg, env, log)
    acc = MetricsAccumulator(env.box_x, env.box_y, log)
    marks = checkpoint_rounds(cfg.rounds, cfg.record_stride)
    multi = isinstance(algo, MultiPredictorOptOppm)

    records = []
    doublings = 0
    inc = None
    start = time.perf_counter()
    emit, observe = algo.emit, algo.observe
    next_payoff, record = env.next_payoff, acc.record_round
    bx, by = env.box_x, env.box_y
    for t in range(1, cfg.rounds + 1):
        x, y = emit()
        f = next_payoff(t, (x, y))
        br = (f.best_response_x(y, bx), f.best_response_y(x, by))
        inc = record(f, x, y, br)
        try:
            diag = observe(f, br)
        except InnerSolveError as e:
            raise InnerSolveError(f"round {t}: {e}") from e
        if diag.doubled:
            doublings += 1
        if t in marks:
            snap = acc.snapshot()
            stage = (diag.stage_x,) if isinstance(algo, Oppm) else (diag.stage_x, diag.stage_y)
            records.append(RoundRecord(
                t=t, x=x, y=y, x_br=br[0], y_br=br[1],
                dgap_avg=snap.dgap_avg, nereg_avg=snap.nereg_avg,
                reg1_avg=snap.reg1_avg, reg2_avg=snap.reg2_avg,
                path=snap.path, vt=snap.vt, eta=diag.eta, gamma=diag.gamma,
                stage=stage, doubled=diag.doubled,
                weights=tuple(float(w) for w in diag.weights) if multi else None,
                dgap_inc=inc.dgap,
            ))
    elapsed = time.perf_counter() - start
    totals = {
        "dgap": acc.dgap_sum,
        "reg1": acc.reg1_sum,
        "reg2": acc.reg2_sum,
        "nereg_signed": acc.nereg_signed_sum if acc.nereg_available else None,
        "path": acc.path_sum,
        "vt": acc.vt_sum if acc.vt_available else None,
    }
    return ExperimentResult(cfg, records, acc.snapshot(), totals, inc, log, doublings, elapsed)
