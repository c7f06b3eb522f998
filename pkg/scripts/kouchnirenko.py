"""Solve x^5/y + 1.392 y = 1, y^5/x + 1.392 x = 1 by both routes and compare."""

import argparse

import numpy as np

from fewnomial import trinomials as tr
from fewnomial.io import load_fixture, problem_from_dict
from fewnomial.oracle import OracleConfig, multistart_solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--starts", type=int, default=1024)
    args = ap.parse_args()

    p = problem_from_dict(load_fixture("haas_like"))
    tp = tr.two_trinomial_standardize(p)
    print("pairs", tp.pairs, "gamma", (tp.gamma1, tp.gamma2))
    print("bound for the exponent pattern:", tr.two_trinomial_bound(tp))

    exact = sorted(tr.two_trinomial_solutions(tp), key=lambda s: s[0][0])
    print(f"\nreduction: {len(exact)} solutions")
    for x, mult, res in exact:
        print(f"  x = {x[0]:.12f}  y = {x[1]:.12f}  mult {mult}  residual {res:.1e}")

    orc = multistart_solve(p, OracleConfig(seed=args.seed, starts=args.starts))
    print(f"\nmultistart ({args.starts} starts, seed {args.seed}): {len(orc)} solutions")
    for x, r in zip(orc.solutions, orc.residuals):
        print(f"  x = {x[0]:.12f}  y = {x[1]:.12f}  residual {r:.1e}")
    if len(orc) == len(exact):
        gap = np.max(np.abs(np.array([x for x, _, _ in exact]) - orc.solutions))
        print(f"\nmax difference between routes {gap:.1e}")


if __name__ == "__main__":
    main()
