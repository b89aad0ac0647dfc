import pytest
from hypothesis import given, settings, strategies as st

from turingfam import corpus
from turingfam.machine import HaltedError, Status, parse_machine
from turingfam.simulator import (
    TMMachine,
    Verdict,
    bounded_simulate,
    initial_configuration,
    run,
    step,
    trace,
    trace_records,
)

from strategies import programs

SELF_LOOP = """\
states: q0
tapes: 1
blank: _
start: q0
accept: acc
reject: rej
delta: q0 _ -> q0 _ S
"""


@pytest.fixture
def self_loop():
    return parse_machine(SELF_LOOP)


def test_accepting_program_starts_halted(accept):
    m = TMMachine(accept, "101")
    assert m.status is Status.ACCEPT
    with pytest.raises(HaltedError):
        m.step()
    with pytest.raises(HaltedError):
        step(accept, initial_configuration(accept, "1"))


def test_self_loop_step_only_advances_the_counter(self_loop):
    c0 = initial_configuration(self_loop)
    c1 = step(self_loop, c0)
    assert (c1.state, c1.tapes, c1.heads) == (c0.state, c0.tapes, c0.heads)
    assert c1.steps == c0.steps + 1


def test_palindrome_first_step(palindrome):
    # q0 reads '1': delta q0 1 -> r1 _ R
    c1 = step(palindrome, initial_configuration(palindrome, "101"))
    assert c1.state == "r1"
    assert c1.heads == (1,)
    assert c1.tape(0) == {1: "0", 2: "1"}


def test_run_examples(accept, self_loop, palindrome):
    r = run(accept, "0110", 0)
    assert (r.verdict, r.steps) == (Verdict.ACCEPTED, 0)
    r = run(self_loop, "", 1000)
    assert (r.verdict, r.steps) == (Verdict.OUT_OF_BUDGET, 1000)
    assert run(palindrome, "1001").verdict is Verdict.ACCEPTED
    assert run(palindrome, "10").verdict is Verdict.REJECTED
    assert run(palindrome, "1001").steps == naive_steps(palindrome, "1001")


def naive_steps(p, word, budget=10**5):
    """Independent interpreter: plain list tape that grows on demand."""
    tape = list(word) or [p.blank]
    head, state, steps = 0, p.start_state, 0
    while state not in (p.accept_state, p.reject_state) and steps < budget:
        if head < 0:
            tape.insert(0, p.blank)
            head = 0
        if head >= len(tape):
            tape.append(p.blank)
        rule = p.transitions.get((state, (tape[head],)))
        if rule is None:
            state = p.reject_state
        else:
            tape[head] = rule.write[0]
            head += {"L": -1, "S": 0, "R": 1}[rule.move[0]]
            state = rule.state
        steps += 1
    return steps


@pytest.mark.parametrize("name", ["palindrome", "zeros_ones", "scan", "bb2", "bb3"])
@pytest.mark.parametrize("word", ["", "0", "1", "11", "0011", "1001", "10", "011"])
def test_run_agrees_with_naive_interpreter(name, word):
    p = corpus.load(name)
    assert run(p, word).steps == naive_steps(p, word)


def test_bounded_simulate_examples(self_loop):
    scan = corpus.load("scan")
    assert run(scan, "11").steps == 3
    assert bounded_simulate(scan, "11", 0) == 0
    assert bounded_simulate(scan, "11", 2) == 0
    assert bounded_simulate(scan, "11", 3) == 1
    for k in (0, 1, 10, 1000, 10**6):
        assert bounded_simulate(self_loop, "", k) == 0


def test_bounded_simulate_counts_rejection_as_halting():
    scan = corpus.load("scan")
    assert run(scan, "0").verdict is Verdict.REJECTED
    assert bounded_simulate(scan, "0", 1) == 1


def test_trace_examples(self_loop, palindrome, accept):
    t = trace(accept, "", 0)
    assert len(t) == 1 and not t.budget_exceeded
    t = trace(self_loop, "", 3)
    assert [c.steps for c in t] == [0, 1, 2, 3]
    assert len({c.tapes for c in t}) == 1
    assert t.budget_exceeded
    t = trace(palindrome, "1")
    assert t[-1].state == palindrome.accept_state
    for a, b in zip(t, t[1:]):
        assert step(palindrome, a) == b


def test_trace_records_window(palindrome):
    recs = list(trace_records(palindrome, trace(palindrome, "101")))
    assert recs[0]["windows"][0][8:11] == ["1", "0", "1"]
    assert all(len(w) == 17 for r in recs for w in r["windows"])


def test_missing_transition_rejects_in_one_step(palindrome):
    r = run(palindrome, "2")
    assert (r.verdict, r.steps) == (Verdict.REJECTED, 1)


@pytest.mark.parametrize("name", corpus.machine_names())
def test_bounded_simulate_is_monotone(name):
    p = corpus.load(name)
    for word in ["", "1", "0110", "111"]:
        bits = [bounded_simulate(p, word, k) for k in range(0, 60)]
        assert bits == sorted(bits)


@settings(max_examples=100, deadline=None)
@given(programs, st.text("01_", max_size=5), st.integers(0, 60), st.integers(0, 60))
def test_larger_budget_agrees_once_halted(p, word, b1, extra):
    small = run(p, word, b1)
    if small.halted:
        big = run(p, word, b1 + extra)
        assert (big.verdict, big.steps, big.final) == (small.verdict, small.steps, small.final)


@settings(max_examples=100, deadline=None)
@given(programs, st.text("01", max_size=5))
def test_step_invariants(p, word):
    c = initial_configuration(p, word)
    for _ in range(30):
        if p.is_halt(c.state):
            break
        d = step(p, c)
        assert d.steps == c.steps + 1
        assert all(abs(a - b) <= 1 for a, b in zip(c.heads, d.heads))
        assert sum(map(len, d.tapes)) <= sum(map(len, c.tapes)) + p.tape_count
        assert all(s != p.blank for tape in d.tapes for _, s in tape)
        c = d


@settings(max_examples=50, deadline=None)
@given(programs, st.text("01", max_size=4))
def test_traces_are_deterministic(p, word):
    assert trace(p, word, 40) == trace(p, word, 40)


def test_fast_run_matches_single_steps():
    for name in ("palindrome", "palindrome2", "counter", "zeros_ones"):
        p = corpus.load(name)
        for word in ("", "0110", "0011", "10"):
            slow = TMMachine(p, word)
            while not slow.halted and slow.steps < 300:
                slow.step()
            fast = TMMachine(p, word)
            fast.run(300)
            assert slow.configuration() == fast.configuration()
            assert slow.status is fast.status
