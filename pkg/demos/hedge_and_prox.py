"""The two inner solvers on small hand-checkable inputs.

1. Clipped simplex projection: the KL projection of a weight vector onto
   the simplex with every coordinate at least alpha / d.
2. Clipped Hedge learning which of three experts has the smallest loss.
3. Closed-form joint prox step of the bilinear-quadratic saddle
   f(x, y) = (x - a)^2 / 2 + (x - a)(y - b) - (y - b)^2 / 2.

Usage: python3 demos/hedge_and_prox.py
"""

import numpy as np

from osp_prox import BoxSet, ClippedHedge, ProxProblem, QuadraticSaddle, clipped_simplex_solve, solve_joint_prox


def main():
    W = np.array([0.90, 0.09, 0.01])
    for alpha in (0.0, 0.3, 0.9):
        print(f"clip alpha={alpha}: {np.round(clipped_simplex_solve(W, alpha), 6)}")

    hedge = ClippedHedge(3)
    rng = np.random.default_rng(0)
    for t in range(1, 501):
        losses = rng.uniform(0, 1, 3) + np.array([0.3, 0.0, 0.3])
        step = hedge.step(losses, t)
    print(f"hedge weights after 500 rounds: {np.round(step.weights, 4)} (expert 1 is best)")

    box = BoxSet.interval(-4.0, 4.0)
    rep = solve_joint_prox(ProxProblem(QuadraticSaddle(0.0, 0.0), 1.0, 1.0, 1.0, 0.0, box, box))
    print(f"joint prox from anchor (1, 0), unit rates: x={rep.x:.6f} y={rep.y:.6f} via {rep.method}")


if __name__ == "__main__":
    main()
