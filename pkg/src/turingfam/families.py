"""Uniform machine families, the halting family, and dovetailing.

A family maps an index ``k`` to a *member*: a constructor that builds a
fresh :class:`~turingfam.machine.Machine` for an input.  A family solves a
language when every member halts on every input and some member accepts
exactly the members of the language.  Running members ``0, 1, 2, ...`` one
after the other turns such a family into a semi-decider, and bounding a
semi-decider's clock at ``k`` steps turns it back into a family, so the
languages solved this way are exactly the semi-decidable ones.

That ceiling is hard.  Totality (does a machine halt on *every* input) is
Pi_2-complete, hence not semi-decidable, and no family here can decide it.
:func:`dovetail_solve` therefore has two outcomes only, ``Accept`` and
``Exhausted``; running out of budget is never evidence of non-membership.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .machine import (
    GoedelCode,
    HaltedError,
    Machine,
    MalformedEncodingError,
    Status,
    as_word,
    decode_machine,
    encode_machine,
)
from .simulator import DEFAULT_BUDGET, TMMachine


class FamilyDefinitionError(RuntimeError):
    pass


# -- pair encoding ------------------------------------------------------


def encode_pair(program_or_code, x) -> bytes:
    """``<len>:<canonical bytes><input symbols joined by spaces>``."""
    code = program_or_code if isinstance(program_or_code, GoedelCode) else encode_machine(program_or_code)
    body = code.canonical_bytes
    word = " ".join(as_word(x)).encode("utf-8")
    return str(len(body)).encode("ascii") + b":" + body + word


def decode_pair(z: bytes):
    head, sep, rest = bytes(z).partition(b":")
    if not sep or not head.isdigit():
        raise MalformedEncodingError("length-prefix", "pair lacks a '<len>:' prefix")
    n = int(head)
    if n > len(rest) or head != str(n).encode():
        raise MalformedEncodingError("length-prefix", "length prefix does not fit the payload")
    program = decode_machine(GoedelCode(rest[:n]))
    try:
        word_text = rest[n:].decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedEncodingError("utf-8", "input word is not UTF-8") from None
    word = tuple(word_text.split(" ")) if word_text else ()
    if any(not s for s in word):
        raise MalformedEncodingError("input-word", "empty symbol in input word")
    return program, word


# -- machines used as family members -----------------------------------


class FixedMachine(Machine):
    """Halted at construction with a fixed status."""

    def __init__(self, status: Status):
        self.status = status
        self.steps = 0

    def _advance(self):  # pragma: no cover - status is never RUNNING
        raise HaltedError("fixed machine never runs")


class ClockedMachine(Machine):
    """Run ``inner`` for at most ``k`` steps: accept if it halted, else reject."""

    def __init__(self, inner: Machine, k: int):
        self.inner = inner
        self.k = k
        self.steps = 0
        self.status = self._check(0)

    def _check(self, elapsed: int) -> Status:
        if self.inner.halted:
            return Status.ACCEPT
        if elapsed >= self.k:
            return Status.REJECT
        return Status.RUNNING

    def _advance(self):
        self.inner.step()
        self.status = self._check(self.steps + 1)

    def run(self, budget: int) -> Status:
        if self.status.halted:
            return self.status
        start = self.inner.steps
        self.inner.run(start + min(budget, self.k) - self.steps)
        self.steps += self.inner.steps - start
        self.status = self._check(self.steps)
        return self.status


class PairSimulator(Machine):
    """Semi-decider for the halting problem: simulate ``M`` on ``x`` from
    ``<M, x>`` and halt (accepting) iff it halts.  Loops on malformed pairs."""

    def __init__(self, z: bytes):
        self.steps = 0
        self.status = Status.RUNNING
        try:
            program, word = decode_pair(z)
        except MalformedEncodingError:
            self.inner = None
            return
        self.inner = TMMachine(program, word)
        if self.inner.halted:
            self.status = Status.ACCEPT

    def _advance(self):
        if self.inner is None:
            return
        self.inner.step()
        if self.inner.halted:
            self.status = Status.ACCEPT


def halting_member(k: int, z: bytes) -> Machine:
    try:
        program, word = decode_pair(z)
    except MalformedEncodingError:
        return FixedMachine(Status.REJECT)
    return ClockedMachine(TMMachine(program, word), k)


# -- families -----------------------------------------------------------


@dataclass(frozen=True)
class Member:
    k: int
    build: Callable[[Any], Machine]
    description: str
    code: GoedelCode | None = None

    def __call__(self, x) -> Machine:
        return self.build(x)


@dataclass
class MachineFamily:
    generator: Callable[[int], Member]
    description: str
    claims: dict = field(default_factory=dict)
    step_bound: Callable[[int], int] | None = None


def family_member(f: MachineFamily, k: int) -> Member:
    if k < 0:
        raise ValueError("family index must be non-negative")
    try:
        member = f.generator(k)
    except Exception as e:
        raise FamilyDefinitionError(f"generator of {f.description!r} failed at k={k}: {e}") from e
    if not isinstance(member, Member):
        raise FamilyDefinitionError(f"generator of {f.description!r} returned {type(member).__name__}")
    return member


def halting_family() -> MachineFamily:
    def generator(k: int) -> Member:
        return Member(
            k=k,
            build=lambda z, k=k: halting_member(k, z),
            description=f"halting-member k={k}: simulate the first {k} steps of M on x",
        )

    return MachineFamily(
        generator=generator,
        description="halting",
        claims={"i": True, "ii": True, "iii": "claimed_via_theory", "iv": True},
    )


def semidecider_to_family(build: Callable[[Any], Machine], name: str = "semidecider") -> MachineFamily:
    """Member ``k`` accepts ``x`` iff ``build(x)`` halts within ``k`` steps."""

    def generator(k: int) -> Member:
        return Member(
            k=k,
            build=lambda x, k=k: ClockedMachine(build(x), k),
            description=f"{name} clocked at {k} steps",
        )

    return MachineFamily(
        generator=generator,
        description=f"clocked({name})",
        claims={"i": True, "ii": True, "iii": False, "iv": True},
    )


# -- dovetailing --------------------------------------------------------


@dataclass(frozen=True)
class Accept:
    k: int
    member_steps: int
    total_steps: int
    violations: tuple[int, ...] = ()


@dataclass(frozen=True)
class Exhausted:
    """Search stopped at ``k_max`` / ``budget``.  Not a rejection: the
    unbounded procedure would simply keep running."""

    k_max: int
    budget: int
    total_steps: int
    violations: tuple[int, ...] = ()

    def __bool__(self):
        raise TypeError("Exhausted has no truth value; it does not mean x is outside L")


DovetailResult = Accept | Exhausted


def dovetail_solve(f: MachineFamily, x, budget: int = DEFAULT_BUDGET, k_max: int = 1000) -> DovetailResult:
    """Run members ``0..k_max`` in order; return the first that accepts.

    A member still running after ``budget`` steps breaks condition (i); its
    index is recorded in ``violations`` and the search moves on.
    """
    if budget < 0 or k_max < 0:
        raise ValueError("budget and k_max must be non-negative")
    total = 0
    violations = []
    for k in range(k_max + 1):
        machine = family_member(f, k)(x)
        machine.run(budget)
        total += machine.steps
        if machine.status is Status.ACCEPT:
            return Accept(k, machine.steps, total, tuple(violations))
        if not machine.halted:
            violations.append(k)
    return Exhausted(k_max, budget, total, tuple(violations))


class DovetailMachine(Machine):
    """Semi-decider built from a family: one step is either one step of the
    current member or a switch to the next member."""

    def __init__(self, f: MachineFamily, x):
        self.family = f
        self.x = x
        self.k = 0
        self.steps = 0
        self.current = family_member(f, 0)(x)
        self.status = Status.ACCEPT if self.current.status is Status.ACCEPT else Status.RUNNING

    def _advance(self):
        cur = self.current
        if cur.status is Status.ACCEPT:
            self.status = Status.ACCEPT
            return
        if cur.halted:
            self.k += 1
            self.current = family_member(self.family, self.k)(self.x)
            return
        cur.step()
        if cur.status is Status.ACCEPT:
            self.status = Status.ACCEPT

    def run(self, budget: int) -> Status:
        # same step accounting as repeated step(), but members run in bulk
        while not self.status.halted and self.steps < budget:
            cur = self.current
            if cur.halted:
                self.step()
                continue
            before = cur.steps
            cur.run(before + budget - self.steps)
            self.steps += cur.steps - before
            if cur.status is Status.ACCEPT:
                self.status = Status.ACCEPT
        return self.status


def family_to_semidecider(f: MachineFamily) -> Callable[[Any], Machine]:
    return lambda x: DovetailMachine(f, x)


# -- compliance ---------------------------------------------------------


@dataclass(frozen=True)
class LanguageFixture:
    name: str
    oracle: Callable[[Any], bool]
    samples: Sequence[Any]


@dataclass
class ComplianceReport:
    family: str
    language: str
    k_range: tuple[int, int]
    budget: int
    nonhalting: list[tuple[Any, int]] = field(default_factory=list)
    mismatches: list[Any] = field(default_factory=list)
    steps: dict = field(default_factory=dict)
    generator_errors: list[str] = field(default_factory=list)
    nondeterministic: list[int] = field(default_factory=list)

    @property
    def condition_i(self) -> bool:
        return not self.nonhalting

    @property
    def condition_ii(self) -> bool:
        return not self.mismatches and not self.nonhalting

    @property
    def max_steps_by_k(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (_, k), s in self.steps.items():
            out[k] = max(out.get(k, 0), s)
        return dict(sorted(out.items()))

    @property
    def grows_with_k(self) -> bool:
        """True when the worst member running time increases across the k range."""
        series = list(self.max_steps_by_k.values())
        return len(series) > 1 and series[-1] > series[0]

    @property
    def condition_iv(self) -> bool:
        return not self.generator_errors and not self.nondeterministic

    def records(self) -> dict:
        return {
            "i": {"pass": self.condition_i, "violations": [
                {"sample": _show(x), "k": k} for x, k in self.nonhalting]},
            "ii": {"pass": self.condition_ii, "mismatches": [_show(x) for x in self.mismatches]},
            "iii": {
                "max_steps_by_k": {str(k): v for k, v in self.max_steps_by_k.items()},
                "grows_with_k": self.grows_with_k,
            },
            "iv": {"pass": self.condition_iv, "errors": self.generator_errors,
                   "nondeterministic": self.nondeterministic},
        }


def _show(x):
    if isinstance(x, (bytes, bytearray)):
        try:
            program, word = decode_pair(x)
        except MalformedEncodingError:
            return f"<malformed {bytes(x[:16])!r}>"
        return f"<pair {hashlib.sha256(x).hexdigest()[:12]} start={program.start_state} input={''.join(word)!r}>"
    return x if isinstance(x, (int, str)) else repr(x)


def _status_sequence(machine: Machine, budget: int) -> list[Status]:
    seq = [machine.status]
    while not machine.halted and machine.steps < budget:
        seq.append(machine.step())
    return seq


def check_conditions(
    f: MachineFamily, L: LanguageFixture, k_range: Iterable[int] | tuple[int, int], budget: int = DEFAULT_BUDGET
) -> ComplianceReport:
    """Empirically check conditions (i)-(iv) over ``k_range`` and ``L.samples``."""
    if isinstance(k_range, tuple) and len(k_range) == 2:
        ks = list(range(k_range[0], k_range[1] + 1))
    else:
        ks = list(k_range)
    report = ComplianceReport(f.description, L.name, (min(ks), max(ks)), budget)
    accepted: dict[int, bool] = {}
    for k in ks:
        try:
            first = family_member(f, k)
            second = family_member(f, k)
        except FamilyDefinitionError as e:
            report.generator_errors.append(str(e))
            continue
        if first.description != second.description or first.code != second.code:
            report.nondeterministic.append(k)
        for i, x in enumerate(L.samples):
            a = _status_sequence(first(x), budget)
            b = _status_sequence(second(x), budget)
            if a != b and k not in report.nondeterministic:
                report.nondeterministic.append(k)
            report.steps[(i, k)] = len(a) - 1
            if a[-1] is Status.RUNNING:
                report.nonhalting.append((x, k))
            elif a[-1] is Status.ACCEPT:
                accepted[i] = True
    for i, x in enumerate(L.samples):
        if accepted.get(i, False) != bool(L.oracle(x)):
            report.mismatches.append(x)
    return report
