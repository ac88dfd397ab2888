"""Invariant and oracle suites behind ``osp-prox verify``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algorithms import clipped_simplex_solve
from ..errors import OspError
from ..geometry import BoxSet
from ..inner_solvers import ProxProblem, solve_joint_prox
from ..invariants import InvariantLog
from ..payoffs import QuadraticPayoff
from .config import ALGORITHMS, ExperimentConfig
from .oracles import clipped_projection_bisection, joint_prox_grid
from .rng import SplitMix64
from .runner import run_experiment

SHIPPED_ENVIRONMENTS = ("case1", "case2", "case3", "case4", "nereg_cancel")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def random_saddles(seed: int, n: int = 257, half: float = 3.5) -> list:
    rng = SplitMix64(seed ^ 0x5EED)
    return [[half * (2 * rng.uniform() - 1), half * (2 * rng.uniform() - 1)] for _ in range(n)]


def invariant_configs(rounds: int, seeds) -> list:
    cfgs = []
    for seed in seeds:
        for alg in ALGORITHMS:
            for env in SHIPPED_ENVIRONMENTS:
                cfgs.append(ExperimentConfig(environment=env, algorithm=alg, rounds=rounds, seed=seed))
            cfgs.append(ExperimentConfig(environment="stationary", algorithm=alg, rounds=rounds,
                                         seed=seed, saddle=[1.0, 1.0]))
            cfgs.append(ExperimentConfig(environment="custom", algorithm=alg, rounds=rounds,
                                         seed=seed, saddles=random_saddles(seed),
                                         name=f"random_{alg}"))
    return cfgs


def invariant_suite(rounds: int = 2000, seeds=(1, 2)) -> SuiteResult:
    """Run every environment x algorithm and collect invariant counters."""
    total = InvariantLog()
    failures = []
    runs = 0
    for cfg in invariant_configs(rounds, seeds):
        try:
            res = run_experiment(cfg)
        except OspError as e:
            failures.append(f"{cfg.label} seed {cfg.seed}: {e}")
            continue
        runs += 1
        for name, info in res.invariants.summary().items():
            failures.append(
                f"invariant '{name}' violated {info['count']}x in {cfg.label} seed {cfg.seed}, "
                f"first at round {info['first_round']}: {res.invariants.details[name]}"
            )
        total.merge(res.invariants)
    ok = not failures
    return SuiteResult("invariants", ok, f"{runs} runs x {rounds} rounds, "
                       f"{total.total} violations", failures)


def hedge_oracle_suite(n: int = 1000, seed: int = 7) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for i in range(n):
        d = int(rng.integers(2, 6))
        W = rng.exponential(size=d) * np.exp(rng.normal(scale=3.0, size=d))
        alpha = float(rng.uniform(0.0, 1.0))
        w = clipped_simplex_solve(W, alpha)
        ref = clipped_projection_bisection(W, alpha)
        err = float(np.max(np.abs(w - ref)))
        worst = max(worst, err)
        if err > 1e-8:
            failures.append(f"instance {i}: sup error {err:.3g}")
        if abs(w.sum() - 1.0) > 1e-12 or w.min() < alpha / d - 1e-12:
            failures.append(f"instance {i}: infeasible output {w}")
        order = np.argsort(W, kind="stable")
        if np.any(np.diff(w[order]) < -1e-15):
            failures.append(f"instance {i}: order not preserved")
    return SuiteResult("hedge-oracle", not failures, f"{n} instances, worst sup error {worst:.2e}",
                       failures)


def random_prox_instance(rng: np.random.Generator, box: BoxSet):
    P, R = rng.uniform(0.0, 3.0, size=2)
    C = rng.uniform(-2.0, 2.0)
    u, v = rng.uniform(-4.0, 4.0, size=2)
    f = QuadraticPayoff(float(P), float(R), float(C), float(u), float(v), 0.0)
    eta, gamma = np.exp(rng.uniform(np.log(0.05), np.log(20.0), size=2))
    xa, ya = rng.uniform(box._lo, box._hi, size=2)
    return ProxProblem(f, float(eta), float(gamma), float(xa), float(ya), box, box)


def prox_oracle_suite(n: int = 100, n_grid: int = 5, seed: int = 11) -> SuiteResult:
    """Closed form against extragradient on ``n`` instances, and against
    the 0.001 grid on the first ``n_grid`` of them."""
    rng = np.random.default_rng(seed)
    box = BoxSet.interval(-4.0, 4.0)
    worst_it = worst_grid = 0.0
    failures = []
    for i in range(n):
        p = random_prox_instance(rng, box)
        cf = solve_joint_prox(p, method="closed-form")
        it = solve_joint_prox(p, tol=1e-12, method="iterative")
        e_it = max(abs(cf.x - it.x), abs(cf.y - it.y))
        worst_it = max(worst_it, e_it)
        if e_it > 1e-7:
            failures.append(f"instance {i}: closed form vs extragradient {e_it:.3g}")
        if i < n_grid:
            gx, gy = joint_prox_grid(p.payoff, p.eta, p.gamma, p.x_anchor, p.y_anchor, box, box)
            e_g = max(abs(cf.x - gx), abs(cf.y - gy))
            worst_grid = max(worst_grid, e_g)
            if e_g > 2e-3:
                failures.append(f"instance {i}: closed form vs grid {e_g:.3g}")
    return SuiteResult("prox-oracle", not failures,
                       f"{n} instances (grid on {min(n, n_grid)}), worst extragradient gap "
                       f"{worst_it:.2e}, worst grid gap {worst_grid:.2e}", failures)


def run_verify(rounds: int = 2000, seed: int = 1) -> list:
    """All suites; ``seed`` picks the first of two invariant-suite seeds."""
    return [
        invariant_suite(rounds, seeds=(seed, seed + 1)),
        hedge_oracle_suite(),
        prox_oracle_suite(),
    ]
