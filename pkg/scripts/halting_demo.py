"""Dovetail the halting family over the bundled corpus and compare the
accepting index with the directly simulated halt time."""

import argparse
import time

from turingfam.corpus import HALTING_CORPUS
from turingfam.families import Accept, dovetail_solve, halting_family
from turingfam.simulator import halt_time


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=600)
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args()

    f = halting_family()
    print(f"{'machine':<12} {'input':<17} {'halt step':>9} {'outcome':<10} {'k':>5} {'work':>9}")
    start = time.perf_counter()
    for case in HALTING_CORPUS:
        t = halt_time(case.program, case.word, 10**5)
        r = dovetail_solve(f, case.z, args.budget, args.k_max)
        k = r.k if isinstance(r, Accept) else "-"
        print(f"{case.machine:<12} {case.word or 'ε':<17} {t if t is not None else '-':>9} "
              f"{type(r).__name__:<10} {k:>5} {r.total_steps:>9}")
    print(f"\n{time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
