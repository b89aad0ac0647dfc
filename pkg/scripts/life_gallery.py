"""Run every bundled Life pattern and print its verdict."""

import argparse

from turingfam import corpus
from turingfam.life import life_run, replay_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-gens", type=int, default=2000)
    args = ap.parse_args()

    for name in corpus.pattern_names():
        g = corpus.pattern(name)
        r = life_run(g, args.max_gens)
        extra = ""
        if r.period is not None:
            extra = f"period={r.period} displacement={r.displacement}"
        ok = "replayed" if replay_check(g, r) else "REPLAY FAILED"
        print(f"{name:<11} cells={len(g):<3} {r.verdict.value:<21} gen={r.generation:<5} {extra} [{ok}]")


if __name__ == "__main__":
    main()
