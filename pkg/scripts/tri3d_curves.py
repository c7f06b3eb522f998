"""Sample the solution curves of two trinomials in three variables.

Prints component counts for a few (b, c*) choices and writes the samples of
one of them to CSV.
"""

import argparse
import csv

from fewnomial import trinomials as tr
from fewnomial.errors import NoSolutions

CASES = [((1, 2, -2), 2.0), ((1, 2, 2), 1.0), ((-1, -2, -2), 0.99 * (27 / 4) ** 2), ((-1, -2, -2), 1.01 * (27 / 4) ** 2)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=256)
    ap.add_argument("-o", "--output", default=None, help="CSV for the first case")
    args = ap.parse_args()

    for i, (b, cstar) in enumerate(CASES):
        try:
            comps = tr.curve_parametrize_d1(*b, cstar, samples=args.samples)
        except NoSolutions:
            print(f"b={b} c*={cstar:.4g}: no positive solutions")
            continue
        print(f"b={b} c*={cstar:.4g}: {len(comps)} component(s), kinds {[c.kind for c in comps]}")
        if i == 0 and args.output:
            with open(args.output, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["component", "lambda1", "lambda2"])
                for k, c in enumerate(comps):
                    for l1, l2 in c.points:
                        w.writerow([k, l1, l2])
            print(f"  wrote {args.output}")


if __name__ == "__main__":
    main()
