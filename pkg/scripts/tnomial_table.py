"""Bounds for one trinomial and one t-nomial in two variables."""

import argparse

from fewnomial import trinomials as tr


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("ts", nargs="*", type=int, default=[3, 4, 5, 6, 10])
    args = ap.parse_args()
    print(f"{'t':>3} {'bound':>7} {'2^t-2':>7} {'(2/3)t^3+5t':>12}")
    for t in args.ts:
        _, b, two, cub = tr.tnomial_table_row(t)
        assert b == tr.tnomial_bound_from_wronskians(t)
        print(f"{t:>3} {b:>7} {two:>7} {tr.format_mixed(cub):>12}")


if __name__ == "__main__":
    main()
