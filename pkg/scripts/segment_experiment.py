"""Random segment instances: multistart count against the sign-variation bound."""

import argparse
import time
from collections import Counter

import numpy as np

from fewnomial import trinomials as tr
from fewnomial.oracle import OracleConfig, multistart_solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--starts", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    hist = Counter()
    over = attained = agree = 0
    t0 = time.perf_counter()
    for i in range(args.instances):
        p = tr.random_segment_instance(rng, int(rng.integers(1, 5)))
        sp = tr.segment_problem(p)
        bound = tr.segment_rule_of_signs(sp)
        k = len(multistart_solve(p, OracleConfig(seed=i, starts=args.starts)))
        exact = len(tr.segment_solve(sp))
        hist[(bound, exact)] += 1
        over += k > bound
        attained += k == bound
        agree += k == exact
    n = args.instances
    print(f"{n} instances in {time.perf_counter() - t0:.1f} s")
    print(f"oracle above bound: {over}, bound attained: {attained}, oracle = exact solver: {agree}/{n}")
    print("bound  exact  instances")
    for (b, e), c in sorted(hist.items()):
        print(f"{b:5d}  {e:5d}  {c:9d}")


if __name__ == "__main__":
    main()
