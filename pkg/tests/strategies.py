"""Random valid machine programs, as a seeded generator and as a hypothesis
strategy built on top of it."""

import random

from hypothesis import strategies as st

from turingfam.machine import make_program

STATE_POOL = ["q0", "q1", "q2", "q3", "scan", "back", "s_7"]
SYMBOL_POOL = ["0", "1", "x", "Y", "0x", "ab"]


def random_program(rng: random.Random):
    tapes = rng.randint(1, 3)
    states = rng.sample(STATE_POOL, rng.randint(1, len(STATE_POOL)))
    accept, reject = "acc", "rej"
    start = rng.choice(states + [accept])
    symbols = rng.sample(SYMBOL_POOL, rng.randint(1, len(SYMBOL_POOL)))
    alphabet = ["_"] + symbols
    rows = []
    seen = set()
    for _ in range(rng.randint(0, 12)):
        src = rng.choice(states)
        read = tuple(rng.choice(alphabet) for _ in range(tapes))
        if (src, read) in seen:
            continue
        seen.add((src, read))
        rows.append((
            src,
            read,
            rng.choice(states + [accept, reject]),
            tuple(rng.choice(alphabet) for _ in range(tapes)),
            tuple(rng.choice("LSR") for _ in range(tapes)),
        ))
    return make_program(rows, start=start, accept=accept, reject=reject, tapes=tapes, states=states)


programs = st.builds(random_program, st.randoms(use_true_random=False))
