"""Diophantine equations over the naturals and their search machines.

Grammar::

    equation := expr '=' expr
    expr     := term ('+' term)*
    term     := power ('*' power)*
    power    := atom ('^' exponent)?
    atom     := NUMBER | IDENT | '(' expr ')'
    exponent := NUMBER | '(' NUMBER ')'

Variables range over 0, 1, 2, ...  A solution is searched for by walking
all d-tuples in diagonal order, so any solution is eventually found; when
none exists the search never stops.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Union

from .machine import Machine, Status


class EquationSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


class VariableExponentError(EquationSyntaxError):
    pass


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    terms: tuple["Expr", ...]


@dataclass(frozen=True)
class Mul:
    factors: tuple["Expr", ...]


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Add, Mul, Pow]


@dataclass(frozen=True)
class DiophantineEquation:
    lhs: Expr
    rhs: Expr
    variables: tuple[str, ...]
    text: str = ""

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def __str__(self):
        return f"{show(self.lhs)} = {show(self.rhs)}"


_TOKENS = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if m.end() == pos or not m.group(0).strip():
            break
        num, ident, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", num, start))
        elif ident is not None:
            out.append(("ident", ident, start))
        elif op in "+*^=()":
            out.append(("op", op, start))
        else:
            raise EquationSyntaxError(f"unexpected character {op!r}", start)
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables: list[str] = []

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            want = value or "end of input"
            raise EquationSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def equation(self):
        lhs = self.expr()
        if self.peek()[1] != "=":
            tok = self.peek()
            raise EquationSyntaxError("expected '='", tok[2])
        self.take("=")
        rhs = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            msg = "a second '=' is not allowed" if tok[1] == "=" else f"unexpected {tok[1]!r}"
            raise EquationSyntaxError(msg, tok[2])
        return lhs, rhs

    def expr(self):
        terms = [self.term()]
        while self.peek()[1] == "+":
            self.take("+")
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        factors = [self.power()]
        while self.peek()[1] == "*":
            self.take("*")
            factors.append(self.power())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def power(self):
        base = self.atom()
        if self.peek()[1] != "^":
            return base
        self.take("^")
        return Pow(base, self.exponent())

    def exponent(self) -> int:
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            e = int(value)
        elif value == "(":
            self.take("(")
            kind, value, pos = self.peek()
            if kind != "num":
                self._bad_exponent(kind, value, pos)
            self.take()
            self.take(")")
            e = int(value)
        else:
            self._bad_exponent(kind, value, pos)
        if self.peek()[1] == "^":
            # right-associative tower of constants
            self.take("^")
            e = e ** self.exponent()
        return e

    def _bad_exponent(self, kind, value, pos):
        if kind == "ident":
            raise VariableExponentError(f"exponent must be a constant natural, not variable {value!r}", pos)
        raise EquationSyntaxError("exponent must be a constant natural", pos)

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            return Num(int(value))
        if kind == "ident":
            self.take()
            if value not in self.variables:
                self.variables.append(value)
            return Var(value)
        if value == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        raise EquationSyntaxError(f"unexpected {value or 'end of input'!r}", pos)


def parse_equation(text: str) -> DiophantineEquation:
    p = _Parser(text)
    lhs, rhs = p.equation()
    return DiophantineEquation(lhs, rhs, tuple(p.variables), text)


def show(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        return " + ".join(show(t) for t in e.terms)
    if isinstance(e, Mul):
        return "*".join(f"({show(f)})" if isinstance(f, Add) else show(f) for f in e.factors)
    base = show(e.base)
    if not isinstance(e.base, (Num, Var)):
        base = f"({base})"
    return f"{base}^{e.exponent}"


def _eval(e: Expr, env: dict[str, int]) -> int:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Add):
        return sum(_eval(t, env) for t in e.terms)
    if isinstance(e, Mul):
        return reduce(lambda a, b: a * b, (_eval(f, env) for f in e.factors), 1)
    return _eval(e.base, env) ** e.exponent


def evaluate(E: DiophantineEquation, values) -> tuple[int, int]:
    """Exact values of both sides at ``values`` (ordered as ``E.variables``)."""
    values = tuple(values)
    if len(values) != E.dimension:
        raise ValueError(f"expected {E.dimension} value(s), got {len(values)}")
    env = dict(zip(E.variables, values))
    return _eval(E.lhs, env), _eval(E.rhs, env)


def is_solution(E: DiophantineEquation, values) -> bool:
    lhs, rhs = evaluate(E, values)
    return lhs == rhs


# -- polynomial normal form ---------------------------------------------

Monomial = tuple[int, ...]


def _poly(e: Expr, names: tuple[str, ...]) -> dict[Monomial, int]:
    zero = (0,) * len(names)
    if isinstance(e, Num):
        return {zero: e.value} if e.value else {}
    if isinstance(e, Var):
        mono = list(zero)
        mono[names.index(e.name)] = 1
        return {tuple(mono): 1}
    if isinstance(e, Add):
        out: dict[Monomial, int] = {}
        for t in e.terms:
            for mono, c in _poly(t, names).items():
                out[mono] = out.get(mono, 0) + c
        return {m: c for m, c in out.items() if c}
    if isinstance(e, Mul):
        return reduce(_poly_mul, (_poly(f, names) for f in e.factors), {zero: 1})
    result = {zero: 1}
    base = _poly(e.base, names)
    for _ in range(e.exponent):
        result = _poly_mul(result, base)
    return result


def _poly_mul(a, b):
    out: dict[Monomial, int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            out[mono] = out.get(mono, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def normal_form(E: DiophantineEquation) -> dict[Monomial, int]:
    """Expanded ``lhs - rhs`` as monomial -> integer coefficient."""
    names = tuple(sorted(E.variables))
    diff = dict(_poly(E.lhs, names))
    for mono, c in _poly(E.rhs, names).items():
        diff[mono] = diff.get(mono, 0) - c
    return {m: c for m, c in sorted(diff.items()) if c}


# -- tuple enumeration --------------------------------------------------


def pair(x: int, y: int) -> int:
    """Cantor pairing: diagonal ``x + y = s`` is listed with ``y`` ascending."""
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def enumerate_tuple(d: int, i: int) -> tuple[int, ...]:
    """The ``i``-th d-tuple: identity for ``d = 1``, else ``(x, *rest)``
    with ``(x, j) = unpair(i)`` and ``rest`` the ``j``-th (d-1)-tuple."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    out = []
    for _ in range(d - 1):
        x, i = unpair(i)
        out.append(x)
    out.append(i)
    return tuple(out)


def tuple_index(t) -> int:
    t = tuple(t)
    if not t:
        raise ValueError("dimension must be at least 1")
    i = t[-1]
    for x in reversed(t[:-1]):
        i = pair(x, i)
    return i


# -- search -------------------------------------------------------------


class DiophantineMachine(Machine):
    """Step ``i`` tests the ``i``-th tuple; halts accepting on a solution."""

    def __init__(self, E: DiophantineEquation, x=None):
        self.equation = E
        self.steps = 0
        self.solution: tuple[int, ...] | None = None
        self.status = Status.RUNNING

    @property
    def index(self) -> int | None:
        return None if self.solution is None else self.steps - 1

    def _advance(self):
        E = self.equation
        t = enumerate_tuple(E.dimension, self.steps) if E.dimension else ()
        if is_solution(E, t):
            self.solution = t
            self.status = Status.ACCEPT


def equation_to_machine(E: DiophantineEquation) -> DiophantineMachine:
    return DiophantineMachine(E)


@dataclass(frozen=True)
class Solution:
    values: tuple[int, ...]
    index: int

    @property
    def steps(self) -> int:
        return self.index + 1


@dataclass(frozen=True)
class Exhausted:
    """No solution among the first ``budget`` tuples.  Not a proof that none exists."""

    budget: int

    @property
    def steps(self) -> int:
        return self.budget

    def __bool__(self):
        raise TypeError("Exhausted has no truth value; it does not mean 'no solution'")


def solve(E: DiophantineEquation, budget: int = 10**6) -> Solution | Exhausted:
    if budget < 0:
        raise ValueError("budget must be non-negative")
    m = equation_to_machine(E)
    m.run(budget)
    if m.status is Status.ACCEPT:
        assert is_solution(E, m.solution)
        return Solution(m.solution, m.index)
    return Exhausted(budget)
