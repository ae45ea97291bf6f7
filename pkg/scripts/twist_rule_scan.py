"""Compare the two w-tilde twist rules against Ginzburg cohomology for n = 1..N."""

import argparse

from hodgemicro import plumbing


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nmax", type=int, default=5)
    parser.add_argument("--cutoff", type=int, default=10)
    args = parser.parse_args()

    print(f"{'n':>3} {'rule':>8} {'match':>6} {'mismatched cells':>17}")
    for n in range(1, args.nmax + 1):
        for rule in plumbing.WTILDE_RULES:
            match, formula, reference = plumbing.core_crosscheck(n, args.cutoff, rule=rule)
            diff = {k for k in set(formula) | set(reference)
                    if formula.get(k, 0) != reference.get(k, 0)}
            print(f"{n:>3} {rule:>8} {str(match):>6} {len(diff):>17}")


if __name__ == "__main__":
    main()
