"""Compare the three learners on the four benchmark payoff streams.

Runs each (stream, learner) pair for a modest horizon and prints the
average duality gap and Nash regret at a few checkpoints. Slowly drifting
saddles (case1) are tracked by every learner; the alternating stream
(case2) rewards the lag-4 predictor; the period-3 stream (case3) needs the
multi-predictor bank; the adaptive adversary (case4) prevents convergence.

Usage: python3 demos/convergence.py [rounds]
"""

import sys

from osp_prox import ExperimentConfig, run_experiment

ROUNDS = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
CHECKPOINTS = (100, 1000, ROUNDS)


def main():
    print(f"{'stream':8} {'learner':14} " + " ".join(f"gap@{t:<8}" for t in CHECKPOINTS) + " nereg@T")
    for env in ("case1", "case2", "case3", "case4"):
        for alg in ("oppm", "optoppm", "optoppm_multi"):
            res = run_experiment(ExperimentConfig(environment=env, algorithm=alg, rounds=ROUNDS, seed=1))
            gaps = " ".join(f"{res.record_at(t).dgap_avg:<12.4g}" for t in CHECKPOINTS)
            print(f"{env:8} {alg:14} {gaps} {res.final.nereg_avg:.3g}")


if __name__ == "__main__":
    main()
