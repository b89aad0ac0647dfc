"""Machine programs, the textual machine language, Goedel codes and the
common ``Machine`` capability shared by every simulated object.

A program is written line by line::

    states: q0 q1
    tapes: 1
    blank: _
    start: q0
    accept: acc
    reject: rej
    delta: q0 1 -> q1 _ R

The state set is the union of ``states:`` and the three distinguished
states.  The alphabet is the blank plus every symbol that occurs in a
``delta`` line.  A missing transition sends the machine to the reject
state without touching the tapes.
"""

from __future__ import annotations

import abc
import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

MOVES = {"L": -1, "S": 0, "R": 1}

DIRECTIVES = ("states", "tapes", "blank", "start", "accept", "reject")

_TOKEN = re.compile(r"\S+")


class MachineSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MachineSemanticError(ValueError):
    """A well-formed source that violates a program invariant."""

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


class MalformedEncodingError(ValueError):
    def __init__(self, rule: str, message: str = ""):
        super().__init__(f"{rule}: {message}" if message else rule)
        self.rule = rule


class HaltedError(RuntimeError):
    """Raised when ``step`` is called on a machine that already halted."""


class Status(enum.Enum):
    RUNNING = "Running"
    ACCEPT = "HaltedAccept"
    REJECT = "HaltedReject"

    @property
    def halted(self) -> bool:
        return self is not Status.RUNNING


@dataclass(frozen=True)
class Transition:
    state: str
    write: tuple[str, ...]
    move: tuple[str, ...]


@dataclass(frozen=True, eq=True)
class TMProgram:
    states: tuple[str, ...]
    tape_count: int
    alphabet: tuple[str, ...]
    blank: str
    start_state: str
    accept_state: str
    reject_state: str
    transitions: Mapping[tuple[str, tuple[str, ...]], Transition] = field(
        compare=True, repr=False
    )

    def __post_init__(self):
        _validate(self)

    def __hash__(self):
        return hash(canonical_text(self))

    def is_halt(self, state) -> bool:
        return state == self.accept_state or state == self.reject_state

    def transition(self, state, read: tuple) -> Transition:
        t = self.transitions.get((state, read))
        if t is None:
            return Transition(self.reject_state, read, ("S",) * self.tape_count)
        return t

    @property
    def input_alphabet(self) -> tuple[str, ...]:
        return tuple(s for s in self.alphabet if s != self.blank)

    def __str__(self):
        return canonical_text(self)


def _validate(p: TMProgram) -> None:
    if p.tape_count < 1:
        raise MachineSemanticError("tape-count", "tapes must be a positive integer")
    if p.accept_state == p.reject_state:
        raise MachineSemanticError("halt-states", "accept and reject states must differ")
    states = set(p.states)
    for s in (p.start_state, p.accept_state, p.reject_state):
        if s not in states:
            raise MachineSemanticError("unknown-state", f"{s!r} is not declared")
    symbols = set(p.alphabet)
    if p.blank not in symbols:
        raise MachineSemanticError("unknown-symbol", f"blank {p.blank!r} not in alphabet")
    for (src, read), t in p.transitions.items():
        if p.is_halt(src):
            raise MachineSemanticError(
                "halt-transition", f"halt state {src!r} has an outgoing transition"
            )
        for s in (src, t.state):
            if s not in states:
                raise MachineSemanticError("unknown-state", f"{s!r} is not declared")
        if not (len(read) == len(t.write) == len(t.move) == p.tape_count):
            raise MachineSemanticError(
                "tuple-width",
                f"transition from {src!r} has width {len(read)}/{len(t.write)}/"
                f"{len(t.move)}, expected {p.tape_count}",
            )
        for sym in (*read, *t.write):
            if sym not in symbols:
                raise MachineSemanticError("unknown-symbol", f"{sym!r} not in alphabet")
        for mv in t.move:
            if mv not in MOVES:
                raise MachineSemanticError("bad-move", f"{mv!r} is not one of L, S, R")


def make_program(
    transitions: Iterable[tuple[str, Sequence[str], str, Sequence[str], Sequence[str]]],
    *,
    start: str,
    accept: str,
    reject: str,
    tapes: int = 1,
    blank: str = "_",
    states: Iterable[str] = (),
) -> TMProgram:
    """Build a program from ``(src, read, dst, write, move)`` rows."""
    table: dict = {}
    all_states = set(states) | {start, accept, reject}
    symbols = {blank}
    for src, read, dst, write, move in transitions:
        key = (src, tuple(read))
        if key in table:
            raise MachineSemanticError(
                "duplicate-transition", f"two transitions for {src!r} on {' '.join(read)}"
            )
        table[key] = Transition(dst, tuple(write), tuple(move))
        all_states.update((src, dst))
        symbols.update(read)
        symbols.update(write)
    return TMProgram(
        states=tuple(sorted(all_states)),
        tape_count=tapes,
        alphabet=tuple(sorted(symbols)),
        blank=blank,
        start_state=start,
        accept_state=accept,
        reject_state=reject,
        transitions=dict(sorted(table.items())),
    )


def parse_machine(text: str | bytes) -> TMProgram:
    """Parse machine-language source into a validated program."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header: dict[str, tuple[str, int, int]] = {}
    declared_states: list[str] = []
    rows = []
    seen_keys: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = re.match(r"\s*([A-Za-z_]+)\s*:", line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise MachineSyntaxError("expected '<directive>:'", lineno, col)
        name = m.group(1)
        body = line[m.end():]
        body_col = m.end() + 1
        tokens = [(t.group(), body_col + t.start()) for t in _TOKEN.finditer(body)]
        if name == "delta":
            rows.append((lineno, tokens))
            continue
        if name not in DIRECTIVES:
            raise MachineSyntaxError(f"unknown directive {name!r}", lineno, m.start(1) + 1)
        if name in header:
            raise MachineSyntaxError(f"duplicate directive {name!r}", lineno, m.start(1) + 1)
        if name == "states":
            declared_states.extend(t for t, _ in tokens)
            header[name] = ("", lineno, body_col)
            continue
        if len(tokens) != 1:
            raise MachineSyntaxError(
                f"directive {name!r} takes exactly one value", lineno, body_col
            )
        header[name] = (tokens[0][0], lineno, tokens[0][1])

    for name in DIRECTIVES[1:]:
        if name not in header:
            raise MachineSyntaxError(f"missing directive {name!r}", len(text.splitlines()) + 1, 1)
    tapes_tok, tl, tc = header["tapes"]
    if not tapes_tok.isdigit() or int(tapes_tok) < 1:
        raise MachineSyntaxError("tapes must be a positive integer", tl, tc)
    k = int(tapes_tok)

    parsed = []
    for lineno, tokens in rows:
        words = [t for t, _ in tokens]
        if "->" not in words:
            col = tokens[0][1] if tokens else 1
            raise MachineSyntaxError("transition needs '->'", lineno, col)
        arrow = words.index("->")
        lhs, rhs = words[:arrow], words[arrow + 1:]
        if len(lhs) != 1 + k or len(rhs) != 1 + 2 * k:
            raise MachineSemanticError(
                "tuple-width",
                f"line {lineno}: expected {k} read symbol(s), {k} write symbol(s) and "
                f"{k} move(s) for {k} tape(s)",
            )
        moves = rhs[1 + k:]
        for i, mv in enumerate(moves):
            if mv not in MOVES:
                col = tokens[arrow + 2 + k + i][1]
                raise MachineSyntaxError(f"move must be L, S or R, got {mv!r}", lineno, col)
        key = (lhs[0], tuple(lhs[1:]))
        if key in seen_keys:
            raise MachineSemanticError(
                "duplicate-transition",
                f"line {lineno} repeats the transition of line {seen_keys[key]} "
                f"for state {lhs[0]!r} on {' '.join(lhs[1:])}",
            )
        seen_keys[key] = lineno
        parsed.append((lhs[0], lhs[1:], rhs[0], rhs[1:1 + k], moves))

    start, accept, reject = (header[n][0] for n in ("start", "accept", "reject"))
    known = set(declared_states) | {start, accept, reject}
    if declared_states:
        for src, _, dst, _, _ in parsed:
            for s in (src, dst):
                if s not in known:
                    raise MachineSemanticError("unknown-state", f"{s!r} is not declared")
    return make_program(
        parsed,
        start=start,
        accept=accept,
        reject=reject,
        tapes=k,
        blank=header["blank"][0],
        states=known,
    )


def canonical_text(p: TMProgram) -> str:
    lines = [
        "states: " + " ".join(sorted(p.states)),
        f"tapes: {p.tape_count}",
        f"blank: {p.blank}",
        f"start: {p.start_state}",
        f"accept: {p.accept_state}",
        f"reject: {p.reject_state}",
    ]
    for (src, read), t in sorted(p.transitions.items()):
        lines.append(
            f"delta: {src} {' '.join(read)} -> {t.state} {' '.join(t.write)} {' '.join(t.move)}"
        )
    return "\n".join(lines) + "\n"


format_machine = canonical_text


@dataclass(frozen=True)
class GoedelCode:
    canonical_bytes: bytes

    @property
    def number(self) -> int:
        # a leading 0x01 keeps leading zero bytes significant and the value positive
        return int.from_bytes(b"\x01" + self.canonical_bytes, "big")

    @classmethod
    def from_number(cls, n: int) -> "GoedelCode":
        if n < 1:
            raise MalformedEncodingError("positive", "Goedel numbers are positive")
        raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
        if raw[0] != 1:
            raise MalformedEncodingError("lead-byte", "number lacks the 0x01 offset byte")
        return cls(raw[1:])


def encode_machine(p: TMProgram) -> GoedelCode:
    return GoedelCode(canonical_text(p).encode("utf-8"))


def decode_machine(g: GoedelCode | bytes | int) -> TMProgram:
    """Inverse of :func:`encode_machine`; total only on its image."""
    if isinstance(g, int):
        g = GoedelCode.from_number(g)
    data = g.canonical_bytes if isinstance(g, GoedelCode) else bytes(g)
    if not data:
        raise MalformedEncodingError("non-empty", "the empty byte sequence encodes nothing")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedEncodingError("utf-8", str(e)) from None
    try:
        program = parse_machine(text)
    except (MachineSyntaxError, MachineSemanticError) as e:
        raise MalformedEncodingError("well-formed", str(e)) from None
    if canonical_text(program) != text:
        raise MalformedEncodingError("canonical", "bytes are not in canonical form")
    return program


def as_word(x) -> tuple[str, ...]:
    """Coerce a string (one symbol per character) or sequence to an input word."""
    if isinstance(x, str):
        return tuple(x)
    return tuple(x)


class Machine(abc.ABC):
    """Deterministic single-step machine with an absorbing halt status."""

    status: Status = Status.RUNNING
    steps: int = 0

    @abc.abstractmethod
    def _advance(self) -> None:
        """Perform one step; may update ``status``."""

    def step(self) -> Status:
        if self.status.halted:
            raise HaltedError(f"{type(self).__name__} already halted ({self.status.value})")
        self._advance()
        self.steps += 1
        return self.status

    def run(self, budget: int) -> Status:
        """Step until halted or until ``steps`` reaches ``budget``."""
        advance = self._advance
        while self.status is Status.RUNNING and self.steps < budget:
            advance()
            self.steps += 1
        return self.status

    @property
    def halted(self) -> bool:
        return self.status.halted


MachineConstructor = Callable[..., Machine]
