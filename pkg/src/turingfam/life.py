"""Conway's Game of Life on an unbounded plane.

A run terminates when the configuration reaches a fixed point; the fixed
point accepts if any cell is alive and rejects if the plane is empty.
Oscillators and spaceships never reach a fixed point, and a configuration
that recurs (possibly shifted) is proof of that.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .machine import Machine, Status

Cell = tuple[int, int]

DEFAULT_MAX_GENS = 10**6
DEFAULT_HISTORY = 2**16

_NEIGHBOURS = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0))


class PatternSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class LifeGrid:
    live: frozenset[Cell]
    generation: int = 0

    def __init__(self, live: Iterable[Cell] = (), generation: int = 0):
        object.__setattr__(self, "live", frozenset((int(x), int(y)) for x, y in live))
        object.__setattr__(self, "generation", generation)

    def cells(self) -> list[Cell]:
        return sorted(self.live)

    def translate(self, v: Cell) -> "LifeGrid":
        dx, dy = v
        return LifeGrid(((x + dx, y + dy) for x, y in self.live), self.generation)

    def normalized(self) -> tuple[frozenset[Cell], Cell]:
        """Shift so the lexicographically smallest live cell sits at the origin."""
        if not self.live:
            return frozenset(), (0, 0)
        ox, oy = min(self.live)
        return frozenset((x - ox, y - oy) for x, y in self.live), (ox, oy)

    def __len__(self):
        return len(self.live)


def life_step(g: LifeGrid) -> LifeGrid:
    counts = Counter((x + dx, y + dy) for x, y in g.live for dx, dy in _NEIGHBOURS)
    live = g.live
    nxt = [c for c, n in counts.items() if n == 3 or (n == 2 and c in live)]
    return LifeGrid(nxt, g.generation + 1)


class LifeVerdict(enum.Enum):
    ACCEPTING = "TerminatedAccepting"
    REJECTING = "TerminatedRejecting"
    NON_TERMINATING = "ProvedNonTerminating"
    BUDGET = "Budget"


@dataclass(frozen=True)
class LifeResult:
    verdict: LifeVerdict
    generation: int
    period: int | None = None
    displacement: Cell | None = None
    final: LifeGrid | None = None

    def record(self) -> dict:
        out = {"verdict": self.verdict.value, "generation": self.generation}
        if self.verdict is LifeVerdict.NON_TERMINATING:
            out["period"] = self.period
            out["displacement"] = list(self.displacement)
        if self.final is not None:
            out["population"] = len(self.final)
        return out


def life_run(g: LifeGrid, max_gens: int = DEFAULT_MAX_GENS, max_history: int = DEFAULT_HISTORY) -> LifeResult:
    """Iterate until a fixed point, a (shifted) recurrence, or ``max_gens``.

    Generations ``g.generation .. g.generation + max_gens`` are examined.
    """
    if max_gens < 0:
        raise ValueError("max_gens must be non-negative")
    seen: dict[frozenset[Cell], tuple[int, Cell]] = {}
    cur = g
    last = g.generation + max_gens
    while True:
        nxt = life_step(cur)
        if nxt.live == cur.live:
            verdict = LifeVerdict.ACCEPTING if cur.live else LifeVerdict.REJECTING
            return LifeResult(verdict, cur.generation, final=cur)
        key, offset = cur.normalized()
        if key in seen:
            g0, off0 = seen[key]
            d = (offset[0] - off0[0], offset[1] - off0[1])
            return LifeResult(
                LifeVerdict.NON_TERMINATING, cur.generation, cur.generation - g0, d, final=cur
            )
        if len(seen) < max_history:
            seen[key] = (cur.generation, offset)
        if cur.generation >= last:
            return LifeResult(LifeVerdict.BUDGET, cur.generation, final=cur)
        cur = nxt


def advance(g: LifeGrid, gens: int) -> LifeGrid:
    for _ in range(gens):
        g = life_step(g)
    return g


def replay_check(initial: LifeGrid, result: LifeResult) -> bool:
    """Re-derive a verdict from scratch.

    For a non-termination proof, the configuration ``period`` generations
    before the recurrence, advanced ``period`` more generations, must equal
    itself shifted by ``displacement``; and advancing another ``period``
    must shift it again.  For a termination verdict the reported generation
    must be a fixed point of the stated kind.
    """
    at = advance(initial, result.generation - initial.generation)
    if result.verdict is LifeVerdict.NON_TERMINATING:
        if result.period is None or result.period < 1:
            return False
        if result.period == 1 and result.displacement == (0, 0):
            return False
        before = advance(initial, result.generation - result.period - initial.generation)
        if before.translate(result.displacement).live != at.live:
            return False
        later = advance(at, result.period)
        return at.translate(result.displacement).live == later.live
    if result.verdict in (LifeVerdict.ACCEPTING, LifeVerdict.REJECTING):
        if life_step(at).live != at.live:
            return False
        return bool(at.live) == (result.verdict is LifeVerdict.ACCEPTING)
    return True


class LifeMachine(Machine):
    """One step is one generation; halts at a fixed point.  Cycles keep it
    running forever, as a looping program would."""

    def __init__(self, g: LifeGrid):
        self.grid = g
        self.steps = 0
        self._next = life_step(g)
        self.status = self._status()

    def _status(self) -> Status:
        if self._next.live != self.grid.live:
            return Status.RUNNING
        return Status.ACCEPT if self.grid.live else Status.REJECT

    def _advance(self):
        self.grid = self._next
        self._next = life_step(self.grid)
        self.status = self._status()


def life_as_machine(g: LifeGrid) -> LifeMachine:
    return LifeMachine(g)


# -- pattern files ------------------------------------------------------

_RLE_HEADER = re.compile(r"\s*x\s*=\s*(\S+?)\s*,\s*y\s*=\s*(\S+?)\s*(?:,\s*rule\s*=\s*(\S+))?\s*$")


def parse_pattern(text: str) -> LifeGrid:
    """Plaintext (``.``/``O`` rows, ``!`` comments) or an RLE subset."""
    lines = text.splitlines()
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("x") and "=" in stripped:
            return _parse_rle(lines)
        break
    return _parse_plain(lines)


def _parse_plain(lines: list[str]) -> LifeGrid:
    cells = []
    y = 0
    for lineno, line in enumerate(lines, start=1):
        if line.startswith("!"):
            continue
        for x, ch in enumerate(line.rstrip("\r\n")):
            if ch == "O":
                cells.append((x, y))
            elif ch not in ". \t":
                raise PatternSyntaxError(f"unexpected character {ch!r}", lineno, x + 1)
        y += 1
    return LifeGrid(cells)


def _parse_rle(lines: list[str]) -> LifeGrid:
    width = height = None
    cells = []
    x = y = 0
    count = ""
    done = False
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if width is None:
            m = _RLE_HEADER.match(line)
            if not m:
                raise PatternSyntaxError("malformed RLE header", lineno, 1)
            w, h, rule = m.groups()
            if not (w.isdigit() and h.isdigit()):
                raise PatternSyntaxError("pattern bounds must be finite naturals", lineno, 1)
            if rule is not None and rule.upper() not in ("B3/S23", "23/3"):
                raise PatternSyntaxError(f"unsupported rule {rule!r}", lineno, m.start(3) + 1)
            width, height = int(w), int(h)
            continue
        if done:
            raise PatternSyntaxError("data after '!'", lineno, 1)
        for col, ch in enumerate(line, start=1):
            if ch.isdigit():
                count += ch
                continue
            if ch in " \t\r":
                if count:
                    raise PatternSyntaxError("whitespace inside a run count", lineno, col)
                continue
            n = int(count) if count else 1
            count = ""
            if ch == "b":
                x += n
            elif ch == "o":
                cells.extend((x + i, y) for i in range(n))
                x += n
            elif ch == "$":
                y += n
                x = 0
            elif ch == "!":
                done = True
                break
            else:
                raise PatternSyntaxError(f"unexpected character {ch!r}", lineno, col)
            if x > width or y >= height + (1 if ch == "$" else 0):
                raise PatternSyntaxError("cells outside the declared bounds", lineno, col)
    if width is None:
        raise PatternSyntaxError("missing RLE header", 1, 1)
    if not done:
        raise PatternSyntaxError("missing terminating '!'", len(lines), 1)
    if count:
        raise PatternSyntaxError("dangling run count", len(lines), 1)
    return LifeGrid(cells)


def format_pattern(g: LifeGrid, style: str = "rle") -> str:
    """Serialise with the bounding box moved to the origin."""
    if not g.live:
        return "x = 0, y = 0\n!\n" if style == "rle" else "\n"
    xs = [x for x, _ in g.live]
    ys = [y for _, y in g.live]
    x0, y0 = min(xs), min(ys)
    w, h = max(xs) - x0 + 1, max(ys) - y0 + 1
    rows = [
        "".join("O" if (x0 + i, y0 + j) in g.live else "." for i in range(w)) for j in range(h)
    ]
    if style == "plain":
        return "\n".join(r.rstrip(".") for r in rows) + "\n"
    if style != "rle":
        raise ValueError(f"unknown pattern style {style!r}")
    out = []
    for j, row in enumerate(rows):
        row = row.rstrip(".")
        for m in re.finditer(r"O+|\.+", row):
            run = len(m.group())
            tag = "o" if m.group()[0] == "O" else "b"
            out.append((str(run) if run > 1 else "") + tag)
        out.append("$" if j < h - 1 else "!")
    body = "".join(out)
    # merge consecutive empty rows into a counted '$'
    body = re.sub(r"\$\$+", lambda m: f"{len(m.group())}$", body)
    return f"x = {w}, y = {h}, rule = B3/S23\n{body}\n"


def normalize(g: LifeGrid) -> LifeGrid:
    """Translate so the bounding box starts at the origin."""
    if not g.live:
        return LifeGrid((), g.generation)
    x0 = min(x for x, _ in g.live)
    y0 = min(y for _, y in g.live)
    return g.translate((-x0, -y0))
