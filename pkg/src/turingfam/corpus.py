"""Bundled fixtures: machine programs, Life patterns, halting pairs,
semi-deciders for small languages, and the named families the CLI knows."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .diophantine import equation_to_machine, parse_equation
from .families import (
    FixedMachine,
    LanguageFixture,
    MachineFamily,
    Member,
    PairSimulator,
    encode_pair,
    halting_family,
    semidecider_to_family,
)
from .life import LifeGrid, parse_pattern
from .machine import Machine, Status, TMProgram, parse_machine

_DATA = resources.files("turingfam") / "data"


def machine_names() -> list[str]:
    return sorted(p.name[:-3] for p in (_DATA / "machines").iterdir() if p.name.endswith(".tm"))


def machine_source(name: str) -> str:
    return (_DATA / "machines" / f"{name}.tm").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> TMProgram:
    return parse_machine(machine_source(name))


def pattern_names() -> list[str]:
    return sorted(p.name.rsplit(".", 1)[0] for p in (_DATA / "patterns").iterdir())


def pattern(name: str) -> LifeGrid:
    for ext in ("rle", "cells"):
        path = _DATA / "patterns" / f"{name}.{ext}"
        if path.is_file():
            return parse_pattern(path.read_text(encoding="utf-8"))
    raise FileNotFoundError(name)


@dataclass(frozen=True)
class HaltingCase:
    machine: str
    word: str
    halts: bool
    kind: str

    @property
    def program(self) -> TMProgram:
        return load(self.machine)

    @property
    def z(self) -> bytes:
        return encode_pair(self.program, self.word)


HALTING_CORPUS = (
    HaltingCase("palindrome", "1001", True, "halting"),
    HaltingCase("palindrome", "0110110110", True, "halting"),
    HaltingCase("zeros_ones", "0000011111", True, "halting"),
    HaltingCase("zeros_ones", "000000001111111", True, "halting"),
    HaltingCase("palindrome2", "110011", True, "halting"),
    HaltingCase("bb2", "", True, "halting"),
    HaltingCase("bb3", "", True, "halting"),
    HaltingCase("scan", "11", True, "halting"),
    HaltingCase("loop", "", False, "looping"),
    HaltingCase("runner", "101", False, "looping"),
    HaltingCase("pingpong", "", False, "looping"),
    HaltingCase("counter", "", False, "looping"),
    HaltingCase("accept", "", True, "edge"),
    HaltingCase("scan", "0", True, "edge"),
)

# equations with a solution early in the search, and ones with none at all
EQUATIONS = (
    "a + b = 5",
    "a = 0",
    "a = 3",
    "a*b = 12",
    "x^2 = 49",
    "a^2 + b^2 = c^2",
    "x^2 = 2",
    "2*x + 1 = 4",
    "a + 1 = 0",
    "(a+1)^3 + (b+1)^3 = (c+1)^3",
)


class SquareSemidecider(Machine):
    """Halts iff ``x`` is a perfect square; step ``i`` tries ``i * i == x``."""

    def __init__(self, x: int):
        self.x = int(x)
        self.steps = 0
        self.status = Status.RUNNING

    def _advance(self):
        if self.steps * self.steps == self.x:
            self.status = Status.ACCEPT


class PrimeSemidecider(Machine):
    """Halts iff ``x`` is prime: trial division, one divisor per step.
    A divisor found, or ``x < 2``, sends it into an endless loop."""

    def __init__(self, x: int):
        self.x = int(x)
        self.d = 2
        self.steps = 0
        self.looping = self.x < 2
        self.status = Status.RUNNING

    def _advance(self):
        if self.looping:
            return
        if self.d * self.d > self.x:
            self.status = Status.ACCEPT
        elif self.x % self.d == 0:
            self.looping = True
        else:
            self.d += 1

    def run(self, budget: int) -> Status:
        while self.status is Status.RUNNING and self.steps < budget and not self.looping:
            self._advance()
            self.steps += 1
        if self.looping:
            # the loop changes nothing, so skip to the end of the budget
            self.steps = max(self.steps, budget)
        return self.status


def is_square(x: int) -> bool:
    return x >= 0 and int(x**0.5 + 0.5) ** 2 == x


def is_prime(x: int) -> bool:
    return x >= 2 and all(x % d for d in range(2, x))


def square_language(hi: int = 120) -> LanguageFixture:
    return LanguageFixture("squares", is_square, list(range(hi + 1)))


def prime_language(hi: int = 120) -> LanguageFixture:
    return LanguageFixture("primes", is_prime, list(range(hi + 1)))


def halting_language() -> LanguageFixture:
    truth = {c.z: c.halts for c in HALTING_CORPUS}
    return LanguageFixture("halting", lambda z: truth[z], list(truth))


def constant_family(steps: int = 3) -> MachineFamily:
    """Member k ignores k: accepts iff x is even, in a fixed number of steps."""

    class Parity(Machine):
        def __init__(self, x):
            self.x = int(x)
            self.steps = 0
            self.status = Status.RUNNING

        def _advance(self):
            if self.steps + 1 >= steps:
                self.status = Status.ACCEPT if self.x % 2 == 0 else Status.REJECT

    return MachineFamily(
        generator=lambda k: Member(k, Parity, f"parity member k={k}"),
        description="constant",
    )


def planted_loop_family(bad: int = 1) -> MachineFamily:
    """A clocked square family whose member ``bad`` never halts."""
    base = semidecider_to_family(SquareSemidecider, "squares")

    class Forever(Machine):
        def __init__(self, x):
            self.steps = 0
            self.status = Status.RUNNING

        def _advance(self):
            pass

    def generator(k):
        if k == bad:
            return Member(k, Forever, f"planted looping member k={k}")
        return base.generator(k)

    return MachineFamily(generator, f"planted-loop(k={bad})")


def equation_family(text: str) -> MachineFamily:
    E = parse_equation(text)
    return semidecider_to_family(lambda x: equation_to_machine(E), f"dio[{text}]")


FAMILIES = {
    "halting": halting_family,
    "squares": lambda: semidecider_to_family(SquareSemidecider, "squares"),
    "primes": lambda: semidecider_to_family(PrimeSemidecider, "primes"),
    "constant": constant_family,
    "planted-loop": planted_loop_family,
}

LANGUAGES = {
    "halting": halting_language,
    "squares": square_language,
    "primes": prime_language,
    "constant": lambda: LanguageFixture("even", lambda x: x % 2 == 0, list(range(41))),
    "planted-loop": square_language,
}

SEMIDECIDERS = {
    "halting": PairSimulator,
    "squares": SquareSemidecider,
    "primes": PrimeSemidecider,
}


def rejecting_machine(x=None) -> Machine:
    return FixedMachine(Status.REJECT)
