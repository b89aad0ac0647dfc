import itertools
import random

import pytest
from hypothesis import given, settings

from turingfam import corpus
from turingfam.machine import (
    GoedelCode,
    MachineSemanticError,
    MachineSyntaxError,
    MalformedEncodingError,
    canonical_text,
    decode_machine,
    encode_machine,
    parse_machine,
)

from strategies import programs

MINIMAL = """\
states: A
tapes: 1
blank: _
start: A
accept: A
reject: R
"""

TWO_RULES = """\
# second rule first on purpose
tapes: 1
blank: _
start: s
accept: t
reject: r
delta: s 1 -> t 1 R
delta: s 0 -> s _ L
"""


def test_minimal_source_accepts_immediately():
    p = parse_machine(MINIMAL)
    assert p.start_state == p.accept_state == "A"
    assert p.transitions == {}


def test_duplicate_transition_is_rejected():
    src = MINIMAL.replace("start: A", "start: q") + "delta: q 1 -> A 1 R\ndelta: q 1 -> R 0 L\n"
    with pytest.raises(MachineSemanticError) as e:
        parse_machine(src.replace("states: A", "states: A q"))
    assert e.value.rule == "duplicate-transition"


def test_palindrome_fixture_shape():
    src = corpus.machine_source("palindrome")
    declared = next(l for l in src.splitlines() if l.startswith("states:")).split()[1:]
    p = parse_machine(src)
    assert p.tape_count == 1
    assert len(p.states) == len(declared) == 8
    assert parse_machine(canonical_text(p)) == p


@pytest.mark.parametrize(
    "src, rule",
    [
        (MINIMAL.replace("states: A", "states: A q") + "delta: q 1 -> nowhere 1 R\n", "unknown-state"),
        (MINIMAL.replace("start: A", "start: q").replace("states: A", "states: A q")
         + "delta: q 1 1 -> A 1 R\n", "tuple-width"),
        (MINIMAL + "delta: A 1 -> R 1 R\n", "halt-transition"),
        (MINIMAL.replace("reject: R", "reject: A"), "halt-states"),
        (MINIMAL.replace("tapes: 1", "tapes: 2").replace("states: A", "states: A q")
         + "delta: q 1 -> A 1 R\n", "tuple-width"),
    ],
)
def test_semantic_errors_name_the_rule(src, rule):
    with pytest.raises(MachineSemanticError) as e:
        parse_machine(src)
    assert e.value.rule == rule


def test_syntax_errors_carry_position():
    with pytest.raises(MachineSyntaxError) as e:
        parse_machine(MINIMAL + "  garbage here\n")
    assert (e.value.line, e.value.column) == (7, 3)
    with pytest.raises(MachineSyntaxError) as e:
        parse_machine(MINIMAL.replace("states: A", "states: A q") + "delta: q 1 -> A 1 X\n")
    assert e.value.line == 7 and e.value.column == 19
    with pytest.raises(MachineSyntaxError):
        parse_machine(MINIMAL.replace("tapes: 1\n", ""))
    with pytest.raises(MachineSyntaxError):
        parse_machine(MINIMAL + "colour: red\n")


def test_comments_and_blank_lines_are_ignored():
    src = "# header\n\n" + MINIMAL.replace("tapes: 1", "tapes: 1   # one tape")
    assert parse_machine(src) == parse_machine(MINIMAL)


@pytest.mark.parametrize("name", corpus.machine_names())
def test_pretty_print_is_a_fixed_point(name):
    p = corpus.load(name)
    text = canonical_text(p)
    assert canonical_text(parse_machine(text)) == text
    assert decode_machine(encode_machine(p)) == p


def test_two_rule_canonical_form_by_hand():
    # states and symbols sorted, transitions sorted by (state, read)
    expected = (
        "states: r s t\n"
        "tapes: 1\n"
        "blank: _\n"
        "start: s\n"
        "accept: t\n"
        "reject: r\n"
        "delta: s 0 -> s _ L\n"
        "delta: s 1 -> t 1 R\n"
    )
    swapped = TWO_RULES.replace(
        "delta: s 1 -> t 1 R\ndelta: s 0 -> s _ L", "delta: s 0 -> s _ L\ndelta: s 1 -> t 1 R"
    )
    a, b = encode_machine(parse_machine(TWO_RULES)), encode_machine(parse_machine(swapped))
    assert a == b
    assert a.canonical_bytes == expected.encode()


def test_always_accepting_program_has_the_smallest_code():
    codes = {name: encode_machine(corpus.load(name)).number for name in corpus.machine_names()}
    smallest = min(codes, key=codes.get)
    assert smallest == "accept"
    assert all(codes["accept"] < n for name, n in codes.items() if name != "accept")


def test_goedel_numbers_are_injective_on_the_corpus():
    codes = [encode_machine(corpus.load(n)) for n in corpus.machine_names()]
    for a, b in itertools.combinations(codes, 2):
        assert a.number != b.number
    for g in codes:
        assert g.number > 0
        assert GoedelCode.from_number(g.number) == g
        assert decode_machine(g.number) == decode_machine(g)


def test_empty_encoding_is_malformed():
    with pytest.raises(MalformedEncodingError) as e:
        decode_machine(GoedelCode(b""))
    assert e.value.rule == "non-empty"
    with pytest.raises(MalformedEncodingError):
        GoedelCode.from_number(0)


def test_random_noise_is_rejected_with_a_rule():
    rng = random.Random(64)
    for _ in range(200):
        noise = bytes(rng.randrange(256) for _ in range(64))
        with pytest.raises(MalformedEncodingError) as e:
            decode_machine(GoedelCode(noise))
        assert e.value.rule in {"utf-8", "well-formed", "canonical"}


def test_non_canonical_bytes_are_rejected():
    raw = MINIMAL.encode()  # parses, but lacks the sorted 'states: A R' line
    with pytest.raises(MalformedEncodingError) as e:
        decode_machine(GoedelCode(raw))
    assert e.value.rule == "canonical"


@settings(max_examples=300)
@given(programs)
def test_encode_decode_round_trip(p):
    g = encode_machine(p)
    assert decode_machine(g) == p
    assert encode_machine(decode_machine(g)) == g


@settings(max_examples=200)
@given(programs)
def test_canonicalisation_is_idempotent(p):
    once = canonical_text(p)
    assert canonical_text(parse_machine(once)) == once
