"""Each corpus equation two ways: the direct tuple search, and the
equation machine wrapped as a clocked family and dovetailed."""

import argparse

from turingfam.corpus import EQUATIONS
from turingfam.diophantine import Solution, equation_to_machine, parse_equation, solve
from turingfam.families import Accept, dovetail_solve, semidecider_to_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=10**5)
    ap.add_argument("--k-max", type=int, default=300)
    args = ap.parse_args()

    for text in EQUATIONS:
        E = parse_equation(text)
        direct = solve(E, args.budget)
        f = semidecider_to_family(lambda _x, E=E: equation_to_machine(E), text)
        d = dovetail_solve(f, None, 10**7, args.k_max)
        if isinstance(direct, Solution):
            lhs = f"{dict(zip(E.variables, direct.values))} at index {direct.index}"
        else:
            lhs = f"nothing in the first {direct.budget} tuples"
        rhs = f"Accept(k={d.k})" if isinstance(d, Accept) else f"Exhausted(k_max={d.k_max})"
        print(f"{text:<30} {lhs:<40} {rhs}")


if __name__ == "__main__":
    main()
