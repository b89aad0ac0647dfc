"""Step semantics for machine programs: single steps, budgeted runs,
bounded simulation and traces.

Anything exposing ``tape_count``, ``blank``, ``start_state``,
``accept_state``, ``reject_state``, ``is_halt`` and ``transition`` can be
run here, which is how sped-up programs share this interpreter.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterator

from .machine import MOVES, HaltedError, Machine, Status, as_word

DEFAULT_BUDGET = 10**6
TRACE_WINDOW = 8


class Verdict(enum.Enum):
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"
    OUT_OF_BUDGET = "OutOfBudget"


@dataclass(frozen=True)
class Configuration:
    state: object
    tapes: tuple[tuple[tuple[int, object], ...], ...]
    heads: tuple[int, ...]
    steps: int = 0

    def tape(self, i: int) -> dict[int, object]:
        return dict(self.tapes[i])

    def read(self, blank) -> tuple:
        return tuple(dict(t).get(h, blank) for t, h in zip(self.tapes, self.heads))

    def window(self, i: int, blank, radius: int = TRACE_WINDOW) -> list:
        cells = dict(self.tapes[i])
        h = self.heads[i]
        return [cells.get(p, blank) for p in range(h - radius, h + radius + 1)]


@dataclass(frozen=True)
class RunResult:
    verdict: Verdict
    steps: int
    final: Configuration

    @property
    def halted(self) -> bool:
        return self.verdict is not Verdict.OUT_OF_BUDGET


def _freeze(tapes, heads, state, steps) -> Configuration:
    return Configuration(
        state=state,
        tapes=tuple(tuple(sorted(t.items())) for t in tapes),
        heads=tuple(heads),
        steps=steps,
    )


def initial_configuration(m, x=()) -> Configuration:
    word = as_word(x)
    tape0 = {i: s for i, s in enumerate(word) if s != m.blank}
    tapes = [tape0] + [{} for _ in range(m.tape_count - 1)]
    return _freeze(tapes, [0] * m.tape_count, m.start_state, 0)


class TMMachine(Machine):
    """A running program on one input; the mutable core behind ``run``."""

    def __init__(self, program, x=()):
        self.program = program
        word = as_word(x)
        self.tapes = [{i: s for i, s in enumerate(word) if s != program.blank}]
        self.tapes += [{} for _ in range(program.tape_count - 1)]
        self.heads = [0] * program.tape_count
        self.state = program.start_state
        self.steps = 0
        self.status = self._status_of(self.state)

    @classmethod
    def from_configuration(cls, program, c: Configuration) -> "TMMachine":
        self = cls.__new__(cls)
        self.program = program
        self.tapes = [dict(t) for t in c.tapes]
        self.heads = list(c.heads)
        self.state = c.state
        self.steps = c.steps
        self.status = self._status_of(c.state)
        return self

    def _status_of(self, state) -> Status:
        if state == self.program.accept_state:
            return Status.ACCEPT
        if state == self.program.reject_state:
            return Status.REJECT
        return Status.RUNNING

    def _advance(self) -> None:
        p = self.program
        blank = p.blank
        tapes, heads = self.tapes, self.heads
        read = tuple(t.get(h, blank) for t, h in zip(tapes, heads))
        t = p.transition(self.state, read)
        for i, (sym, mv) in enumerate(zip(t.write, t.move)):
            if sym == blank:
                tapes[i].pop(heads[i], None)
            else:
                tapes[i][heads[i]] = sym
            heads[i] += MOVES[mv]
        self.state = t.state
        self.status = self._status_of(t.state)

    def run(self, budget: int) -> Status:
        # same semantics as repeated step(), with the lookups hoisted
        if self.status.halted or self.steps >= budget:
            return self.status
        p = self.program
        blank, accept, reject = p.blank, p.accept_state, p.reject_state
        transition = p.transition
        tapes, heads = self.tapes, self.heads
        pairs = list(zip(tapes, range(len(tapes))))
        state, steps = self.state, self.steps
        while steps < budget:
            read = tuple(t.get(heads[i], blank) for t, i in pairs)
            t = transition(state, read)
            for i, sym in enumerate(t.write):
                if sym == blank:
                    tapes[i].pop(heads[i], None)
                else:
                    tapes[i][heads[i]] = sym
                heads[i] += MOVES[t.move[i]]
            state = t.state
            steps += 1
            if state == accept or state == reject:
                break
        self.state, self.steps = state, steps
        self.status = self._status_of(state)
        return self.status

    def configuration(self) -> Configuration:
        return _freeze(self.tapes, self.heads, self.state, self.steps)


def step(m, c: Configuration) -> Configuration:
    """Successor configuration; stepping a halted configuration is an error."""
    if m.is_halt(c.state):
        raise HaltedError(f"configuration is halted in state {c.state!r}")
    sim = TMMachine.from_configuration(m, c)
    sim.step()
    return sim.configuration()


def _verdict(status: Status) -> Verdict:
    return {
        Status.ACCEPT: Verdict.ACCEPTED,
        Status.REJECT: Verdict.REJECTED,
        Status.RUNNING: Verdict.OUT_OF_BUDGET,
    }[status]


def run(m, x=(), budget: int = DEFAULT_BUDGET) -> RunResult:
    if budget < 0:
        raise ValueError("budget must be non-negative")
    sim = TMMachine(m, x)
    sim.run(budget)
    return RunResult(_verdict(sim.status), sim.steps, sim.configuration())


def bounded_simulate(m, x, k: int) -> int:
    """1 if ``m`` halts on ``x`` (either verdict) within ``k`` steps, else 0."""
    return int(run(m, x, k).halted)


def halt_time(m, x=(), budget: int = DEFAULT_BUDGET) -> int | None:
    r = run(m, x, budget)
    return r.steps if r.halted else None


def iter_trace(m, x=(), budget: int = DEFAULT_BUDGET) -> Iterator[Configuration]:
    sim = TMMachine(m, x)
    yield sim.configuration()
    while not sim.halted and sim.steps < budget:
        sim.step()
        yield sim.configuration()


class Trace(list):
    """Configurations c0..cT; ``budget_exceeded`` marks a run cut off while
    still running."""

    budget_exceeded: bool = False


def trace(m, x=(), budget: int = DEFAULT_BUDGET) -> Trace:
    out = Trace(iter_trace(m, x, budget))
    out.budget_exceeded = not m.is_halt(out[-1].state)
    return out


def trace_records(m, configs: Trace) -> Iterator[dict]:
    for c in configs:
        yield {
            "step": c.steps,
            "state": str(c.state),
            "heads": list(c.heads),
            "windows": [
                [str(s) for s in c.window(i, m.blank)] for i in range(len(c.heads))
            ],
        }
    if getattr(configs, "budget_exceeded", False):
        yield {"budget_exceeded": True, "step": configs[-1].steps}


def write_trace(m, configs, fh) -> None:
    for rec in trace_records(m, configs):
        fh.write(json.dumps(rec) + "\n")
