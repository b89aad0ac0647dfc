import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from turingfam.diophantine import (
    EquationSyntaxError,
    Exhausted,
    Solution,
    VariableExponentError,
    enumerate_tuple,
    equation_to_machine,
    evaluate,
    is_solution,
    normal_form,
    pair,
    parse_equation,
    show,
    solve,
    tuple_index,
    unpair,
)
from turingfam.machine import Status


@pytest.mark.parametrize(
    "text, position",
    [
        ("a + = 3", 4),
        ("a + b", 5),
        ("a = b = c", 6),
        ("a - b = 0", 2),
        ("(a + b = 1", 7),
        ("", 0),
    ],
)
def test_syntax_errors(text, position):
    with pytest.raises(EquationSyntaxError) as e:
        parse_equation(text)
    assert e.value.position == position


def test_variable_exponent_is_its_own_error():
    with pytest.raises(VariableExponentError) as e:
        parse_equation("2 ^ x = 4")
    assert e.value.position == 4
    with pytest.raises(VariableExponentError):
        parse_equation("a^(b) = 1")


def test_parse_and_evaluate():
    E = parse_equation("x^2 + 3*y = 2*x*y + 1")
    assert E.variables == ("x", "y")
    assert evaluate(E, (2, 5)) == (19, 21)
    assert evaluate(E, (1, 0)) == (1, 1)
    assert is_solution(E, (1, 0))
    assert parse_equation(show(E.lhs) + " = " + show(E.rhs)) == parse_equation(str(E))
    with pytest.raises(ValueError):
        evaluate(E, (1,))


def test_precedence_and_exponent_towers():
    E = parse_equation("2 + 3*4^2 = 2^3^2")
    assert evaluate(E, ()) == (50, 512)


def diagonal_oracle(d, count):
    """All d-tuples grouped by sum, ordered the way the nested pairing lists them."""
    out = []
    s = 0
    while len(out) < count:
        layer = [t for t in itertools.product(range(s + 1), repeat=d) if sum(t) == s]
        out.extend(layer)
        s += 1
    return out


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_enumeration_is_a_bijection(d):
    N = 10**4
    seen = [enumerate_tuple(d, i) for i in range(N)]
    assert len(set(seen)) == N
    assert all(tuple_index(t) == i for i, t in enumerate(seen))
    assert all(len(t) == d for t in seen)
    # every tuple of small entries shows up early
    box = set(itertools.product(range(4 if d < 4 else 2), repeat=d))
    assert box <= set(seen)


def test_pairing_matches_diagonal_order():
    oracle = diagonal_oracle(2, 500)
    by_sum = sorted(oracle, key=lambda t: (sum(t), t[1]))
    assert [unpair(i) for i in range(500)] == by_sum[:500]
    assert enumerate_tuple(2, 3) == (2, 0)


@given(st.integers(0, 10**12))
def test_pair_unpair_inverse(z):
    assert pair(*unpair(z)) == z


@given(st.lists(st.integers(0, 10**4), min_size=1, max_size=5))
def test_tuple_index_inverse(t):
    assert enumerate_tuple(len(t), tuple_index(t)) == tuple(t)


@pytest.mark.parametrize(
    "text",
    ["a + b = 5", "a = 0", "a = 3", "a*b = 12", "x^2 = 49", "a^2 + b^2 = c^2", "x*y*z = 8"],
)
def test_solution_is_the_first_in_enumeration_order(text):
    E = parse_equation(text)
    r = solve(E, budget=10**5)
    assert isinstance(r, Solution)
    assert is_solution(E, r.values)
    assert tuple_index(r.values) == r.index if E.dimension > 1 else r.values[0] == r.index
    for i in range(r.index):
        assert not is_solution(E, enumerate_tuple(E.dimension, i))


def test_constant_equations():
    assert isinstance(solve(parse_equation("2 + 2 = 4")), Solution)
    assert isinstance(solve(parse_equation("2 + 2 = 5"), budget=10), Exhausted)


@pytest.mark.parametrize(
    "text, box",
    [("x^2 = 2", 300), ("2*x + 1 = 4", 300), ("a + 1 = 0", 300), ("(a+1)^3 + (b+1)^3 = (c+1)^3", 25)],
)
def test_exhausted_cases_have_no_small_solution(text, box):
    E = parse_equation(text)
    r = solve(E, budget=10**4)
    assert isinstance(r, Exhausted) and r.budget == 10**4
    for t in itertools.product(range(box), repeat=E.dimension):
        assert not is_solution(E, t)


def test_exhausted_refuses_truthiness():
    r = solve(parse_equation("x^2 = 2"), budget=10)
    with pytest.raises(TypeError):
        bool(r)


def test_machine_steps_line_up_with_index():
    E = parse_equation("a + b = 5")
    m = equation_to_machine(E)
    m.run(10**3)
    assert m.status is Status.ACCEPT
    assert m.steps == m.index + 1 == solve(E).steps


def test_normal_form_identifies_expansions():
    factored = parse_equation("(a+1)^3 + (b+1)^3 = (c+1)^3")
    expanded = parse_equation(
        "a^3 + 3*a^2 + 3*a + 1 + b^3 + 3*b^2 + 3*b + 1 = c^3 + 3*c^2 + 3*c + 1"
    )
    assert normal_form(factored) == normal_form(expanded)
    assert normal_form(parse_equation("x*x = 4")) == normal_form(parse_equation("x^2 = 4"))
    assert normal_form(parse_equation("x = x")) == {}
