"""Print the core endomorphism table next to the bar cohomology of H*(P^n)."""

import argparse

from hodgemicro import barhodge, plumbing


def print_table(title, table):
    print(title)
    for (a, b), d in sorted(table.items()):
        print(f"  ({a:>2}, {b:>2}) -> {d}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--cutoff", type=int, default=8)
    args = parser.parse_args()

    match, formula, _ = plumbing.core_crosscheck(args.n, args.cutoff)
    print_table(f"core endomorphisms, n={args.n} (matches Ginzburg: {match})", formula)
    bar = barhodge.bar_cohomology_table(barhodge.cohomology_ring_Pn(args.n), args.cutoff)
    print_table(f"bar cohomology of H*(P^{args.n}), (degree, weight)", bar)
    print("loop/Hodge comparison:", barhodge.compare_loop_hodge(args.n, args.cutoff))


if __name__ == "__main__":
    main()
