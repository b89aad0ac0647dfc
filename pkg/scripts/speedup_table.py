"""Step counts before and after the block speed-up, per input length."""

import argparse
import math

from turingfam import corpus
from turingfam.speedup import speed_up, verify_speedup


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("machines", nargs="*", default=["palindrome", "zeros_ones", "palindrome2"])
    ap.add_argument("-C", type=int, nargs="+", default=[2, 4])
    ap.add_argument("--max-len", type=int, default=8)
    args = ap.parse_args()

    for name in args.machines:
        program = corpus.load(name)
        for C in args.C:
            fast = speed_up(program, C)
            report = verify_speedup(program, fast, C, args.max_len, alphabet="01")
            print(f"{name}  C={C}  block={fast.m}  tapes={fast.tape_count}  c_M={report.c_M}  "
                  f"table entries={fast.table_entries}")
            print(f"  {'n':>3} {'max t':>7} {'max t_fast':>10} {'n+ceil(t/C)':>12} {'max slack':>9}")
            by_len = {}
            for p in report.pairs:
                row = by_len.setdefault(p.n, [0, 0, 0])
                row[0] = max(row[0], p.t_orig)
                row[1] = max(row[1], p.t_fast)
                row[2] = max(row[2], p.n + math.ceil(p.t_orig / C))
            slack = report.slack_by_length()
            for n in sorted(by_len):
                t, tf, b = by_len[n]
                print(f"  {n:>3} {t:>7} {tf:>10} {b:>12} {slack[n]:>9}")
            print()


if __name__ == "__main__":
    main()
