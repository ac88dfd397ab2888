"""Nash regret can vanish while the duality gap stays at one.

The cancellation stream answers every play with a payoff whose value is
+1 and -1 on alternate rounds, while each round's duality gap is exactly
1. Nash regret sums signed values, so it cancels out; the duality gap
does not. The demo prints both running averages.

Usage: python3 demos/cancellation.py
"""

from osp_prox import ExperimentConfig, run_experiment


def main():
    res = run_experiment(ExperimentConfig(environment="nereg_cancel", algorithm="oppm", rounds=10_000))
    print(f"{'t':>6} {'avg D-Gap':>10} {'avg NE-Reg':>11}")
    for rec in res.records:
        if rec.t in (1, 10, 100, 1000, 10_000):
            print(f"{rec.t:>6} {rec.dgap_avg:>10.6f} {rec.nereg_avg:>11.2e}")
    print(f"signed NE-Reg total: {res.totals['nereg_signed']:g}; D-Gap total: {res.totals['dgap']:g}")


if __name__ == "__main__":
    main()
