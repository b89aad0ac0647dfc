"""Linear speed-up by tape compression.

``speed_up(program, C)`` builds a machine with one extra tape.  Tape 0
keeps the raw input; tape ``j + 1`` holds original tape ``j`` packed into
block symbols of ``m = 8 * C`` cells each.  The fast machine

1. packs the input onto tape 1 in one left-to-right pass (``n + 1`` steps,
   plus a rewind of ``ceil(n / m) + 1`` steps when the input spans more
   than one block), then
2. repeats a macro step: read the centre, left and right blocks of every
   packed tape (4 moves), look up what the original does in its next
   ``m`` moves on that 3-block window, and write the window back while
   walking to the block that now holds each head (2 or 3 moves).

Seven moves per ``m`` original moves gives ``7 t / (8 C)`` plus setup,
which is inside ``n + t / C + c`` whenever ``t >= n``.

The packed alphabet has ``|alphabet| ** m`` symbols and the window table
``|alphabet| ** (3 m)`` rows per state, so transitions are materialised on
first use and memoised.  A ceiling on the number of materialised rows
turns the blow-up into :class:`TableSizeError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .machine import (
    MOVES,
    MachineSyntaxError,
    Transition,
    canonical_text,
    encode_machine,
    parse_machine,
)
from .simulator import DEFAULT_BUDGET, run

DEFAULT_TABLE_CEILING = 2**20
SPEEDUP_DIRECTIVE = "speedup"


class TableSizeError(MemoryError):
    def __init__(self, ceiling: int):
        super().__init__(f"transition table exceeds the ceiling of {ceiling} entries")
        self.ceiling = ceiling


class SpeedupMismatch(AssertionError):
    def __init__(self, word, slow, fast):
        super().__init__(
            f"verdict mismatch on input {''.join(word)!r}: original {slow}, transformed {fast}"
        )
        self.word = tuple(word)


class SpeedupBudgetError(RuntimeError):
    def __init__(self, word, side: str, budget: int):
        super().__init__(f"{side} machine exceeded budget {budget} on {''.join(word)!r}")
        self.word = tuple(word)


@dataclass(frozen=True)
class SpeedupFactor:
    C: int

    def __post_init__(self):
        if not isinstance(self.C, int) or self.C < 1:
            raise ValueError("speed-up factor C must be a positive integer")

    @property
    def block(self) -> int:
        return 8 * self.C


# Phase tags of the fast machine's finite control.
PACK, REWIND, CENTRE, LEFT, MID, RIGHT, WRITE_C, WRITE_L, SETTLE = (
    "pack", "rewind", "centre", "left", "mid", "right", "write-c", "write-l", "settle",
)


class SpeedupProgram:
    """The compressed machine; runs on the ordinary simulator.

    States are tuples led by a phase tag, except the two halt states which
    reuse the original's names.  Packed tape cells hold tuples of ``m``
    original symbols; an all-blank block is stored as the blank itself.
    """

    def __init__(self, original, factor: SpeedupFactor, ceiling: int = DEFAULT_TABLE_CEILING):
        self.original = original
        self.factor = factor
        self.ceiling = ceiling
        self.m = factor.block
        self.k = original.tape_count
        self.tape_count = self.k + 1
        self.blank = original.blank
        self.accept_state = original.accept_state
        self.reject_state = original.reject_state
        self._blank_block = (original.blank,) * self.m
        self._table: dict = {}
        if original.is_halt(original.start_state):
            self.start_state = original.start_state
        else:
            self.start_state = (PACK, (), False)

    # -- description ---------------------------------------------------

    def description(self) -> str:
        return f"{SPEEDUP_DIRECTIVE}: {self.factor.C}\n" + canonical_text(self.original)

    def description_bytes(self) -> bytes:
        return self.description().encode("utf-8")

    @property
    def input_alphabet(self):
        return self.original.input_alphabet

    @property
    def table_entries(self) -> int:
        return len(self._table)

    def table_size_bound(self) -> int:
        """Rows a fully materialised window table would need."""
        sigma = len(self.original.alphabet)
        return len(self.original.states) * self.m**self.k * sigma ** (3 * self.m * self.k)

    def is_halt(self, state) -> bool:
        return state == self.accept_state or state == self.reject_state

    # -- transitions ---------------------------------------------------

    def transition(self, state, read: tuple) -> Transition:
        key = (state, read)
        t = self._table.get(key)
        if t is None:
            if len(self._table) >= self.ceiling:
                raise TableSizeError(self.ceiling)
            t = self._compute(state, read)
            self._table[key] = t
        return t

    def _reject(self, read) -> Transition:
        return Transition(self.reject_state, read, ("S",) * self.tape_count)

    def _block_of(self, sym):
        if sym == self.blank:
            return self._blank_block
        if isinstance(sym, tuple) and len(sym) == self.m:
            return sym
        return None

    def _cell_of(self, block):
        return self.blank if block == self._blank_block else block

    def _compute(self, state, read) -> Transition:
        if not isinstance(state, tuple):
            return self._reject(read)
        phase = state[0]
        handler = {
            PACK: self._pack,
            REWIND: self._rewind,
            CENTRE: self._centre,
            LEFT: self._left,
            MID: self._mid,
            RIGHT: self._right,
            WRITE_C: self._write_c,
            WRITE_L: self._write_l,
            SETTLE: self._settle,
        }[phase]
        out = handler(state, read)
        return out if out is not None else self._reject(read)

    def _moves(self, raw: str, packed: Sequence[str]) -> tuple[str, ...]:
        return (raw, *packed)

    def _begin(self) -> tuple:
        return (CENTRE, self.original.start_state, (0,) * self.k)

    def _pack(self, state, read):
        _, buf, wrote = state
        sym = read[0]
        rest = read[1:]
        if sym == self.blank:
            stay = ("S",) * self.k
            if buf:
                block = tuple(buf) + (self.blank,) * (self.m - len(buf))
                write = (sym, block, *rest[1:])
                if wrote:
                    return Transition((REWIND,), write, ("S", "L", *stay[1:]))
                return Transition(self._begin(), write, ("S", *stay))
            if wrote:
                return Transition((REWIND,), read, ("S", "L", *stay[1:]))
            return Transition(self._begin(), read, ("S", *stay))
        if not isinstance(sym, str):
            return None
        buf = buf + (sym,)
        if len(buf) == self.m:
            return Transition(
                (PACK, (), True), (sym, buf, *rest[1:]), ("R", "R", *("S",) * (self.k - 1))
            )
        return Transition((PACK, buf, wrote), read, ("R",) + ("S",) * self.k)

    def _rewind(self, state, read):
        if read[1] == self.blank:
            return Transition(self._begin(), read, ("S", "R", *("S",) * (self.k - 1)))
        return Transition((REWIND,), read, ("S", "L", *("S",) * (self.k - 1)))

    def _blocks(self, read):
        blocks = tuple(self._block_of(s) for s in read[1:])
        return None if any(b is None for b in blocks) else blocks

    def _centre(self, state, read):
        _, q, offs = state
        centre = self._blocks(read)
        if centre is None:
            return None
        return Transition((LEFT, q, offs, centre), read, self._moves("S", ("L",) * self.k))

    def _left(self, state, read):
        _, q, offs, centre = state
        left = self._blocks(read)
        if left is None:
            return None
        return Transition((MID, q, offs, centre, left), read, self._moves("S", ("R",) * self.k))

    def _mid(self, state, read):
        return Transition((RIGHT, *state[1:]), read, self._moves("S", ("R",) * self.k))

    def _right(self, state, read):
        _, q, offs, centre, left = state
        right = self._blocks(read)
        if right is None:
            return None
        verdict, q2, windows, heads = self._window(q, offs, left, centre, right)
        if verdict is not None:
            return Transition(verdict, read, ("S",) * self.tape_count)
        m = self.m
        new_l = tuple(w[:m] for w in windows)
        new_c = tuple(w[m:2 * m] for w in windows)
        new_r = tuple(w[2 * m:] for w in windows)
        targets = tuple(h // m - 1 for h in heads)
        offs2 = tuple(h % m for h in heads)
        write = (read[0], *(self._cell_of(b) for b in new_r))
        return Transition(
            (WRITE_C, q2, offs2, targets, new_c, new_l),
            write,
            self._moves("S", ("L",) * self.k),
        )

    def _write_c(self, state, read):
        _, q, offs, targets, new_c, new_l = state
        write = (read[0], *(self._cell_of(b) for b in new_c))
        return Transition(
            (WRITE_L, q, offs, targets, new_l), write, self._moves("S", ("L",) * self.k)
        )

    def _write_l(self, state, read):
        _, q, offs, targets, new_l = state
        write = (read[0], *(self._cell_of(b) for b in new_l))
        moves = tuple("S" if t < 0 else "R" for t in targets)
        if any(t > 0 for t in targets):
            nxt = (SETTLE, q, offs, targets)
        else:
            nxt = (CENTRE, q, offs)
        return Transition(nxt, write, self._moves("S", moves))

    def _settle(self, state, read):
        _, q, offs, targets = state
        moves = tuple("R" if t > 0 else "S" for t in targets)
        return Transition((CENTRE, q, offs), read, self._moves("S", moves))

    def _window(self, q, offs, left, centre, right):
        """Run the original for up to ``m`` moves on the 3-block window."""
        p = self.original
        m = self.m
        cells = [list(l + c + r) for l, c, r in zip(left, centre, right)]
        heads = [m + o for o in offs]
        for _ in range(m):
            read = tuple(cells[i][heads[i]] for i in range(self.k))
            t = p.transition(q, read)
            for i in range(self.k):
                cells[i][heads[i]] = t.write[i]
                heads[i] += MOVES[t.move[i]]
            q = t.state
            if p.is_halt(q):
                return q, q, None, None
        return None, q, tuple(tuple(c) for c in cells), heads


def speed_up(program, C: int | SpeedupFactor, ceiling: int = DEFAULT_TABLE_CEILING) -> SpeedupProgram:
    factor = C if isinstance(C, SpeedupFactor) else SpeedupFactor(C)
    # rebuild from the canonical code so the result depends only on it
    canonical = parse_machine(encode_machine(program).canonical_bytes)
    return SpeedupProgram(canonical, factor, ceiling)


def load_program(text: str | bytes):
    """Parse either plain machine source or a ``speedup: C`` description."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    first, _, rest = text.partition("\n")
    head = first.split("#", 1)[0].strip()
    if head.startswith(SPEEDUP_DIRECTIVE + ":"):
        value = head.split(":", 1)[1].strip()
        if not value.isdigit() or int(value) < 1:
            raise MachineSyntaxError("speedup factor must be a positive integer", 1, len(SPEEDUP_DIRECTIVE) + 3)
        return speed_up(parse_machine(rest), int(value))
    return parse_machine(text)


def words(alphabet: Sequence[str], max_len: int) -> Iterable[tuple[str, ...]]:
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


@dataclass(frozen=True)
class StepPair:
    word: tuple[str, ...]
    t_orig: int
    t_fast: int
    verdict: str

    @property
    def n(self) -> int:
        return len(self.word)


@dataclass
class SpeedupReport:
    C: int
    max_len: int
    pairs: list[StepPair] = field(default_factory=list)

    @property
    def equivalence_checked(self) -> int:
        return self.max_len if self.pairs else -1

    def slack(self, p: StepPair) -> int:
        return p.t_fast - p.n - math.ceil(p.t_orig / self.C)

    @property
    def c_M(self) -> int | None:
        """Smallest c with t_fast <= n + ceil(t_orig / C) + c on every checked input."""
        if not self.pairs:
            return None
        return max(self.slack(p) for p in self.pairs)

    def bound(self, p: StepPair) -> int:
        return p.n + math.ceil(p.t_orig / self.C) + self.c_M

    def slack_by_length(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.pairs:
            out[p.n] = max(out.get(p.n, -(10**18)), self.slack(p))
        return out

    def records(self) -> list[dict]:
        return [
            {
                "input": "".join(p.word),
                "t_orig": p.t_orig,
                "t_fast": p.t_fast,
                "bound": self.bound(p),
                "pass": p.t_fast <= self.bound(p),
            }
            for p in self.pairs
        ]


def verify_speedup(
    original,
    fast,
    C: int | SpeedupFactor,
    max_len: int,
    alphabet: Sequence[str] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SpeedupReport:
    """Run both machines on every input up to ``max_len`` and collect step pairs.

    Raises :class:`SpeedupMismatch` on the first differing verdict.
    """
    c = C.C if isinstance(C, SpeedupFactor) else C
    if alphabet is None:
        alphabet = original.input_alphabet
    report = SpeedupReport(C=c, max_len=max_len)
    for w in words(alphabet, max_len):
        slow = run(original, w, budget)
        if not slow.halted:
            raise SpeedupBudgetError(w, "original", budget)
        quick = run(fast, w, budget)
        if not quick.halted:
            raise SpeedupBudgetError(w, "transformed", budget)
        if slow.verdict != quick.verdict:
            raise SpeedupMismatch(w, slow.verdict.value, quick.verdict.value)
        report.pairs.append(StepPair(w, slow.steps, quick.steps, slow.verdict.value))
    return report
