"""Command-line entry point.

Every command writes line-delimited JSON records to stdout and ends with
exactly one final record (or one error record).  Exit status: 0 for a
definite verdict, 2 when a budget ran out, 1 on errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import corpus
from .diophantine import EquationSyntaxError, Solution, equation_to_machine, parse_equation, solve
from .families import (
    Accept,
    check_conditions,
    dovetail_solve,
    encode_pair,
    halting_family,
    semidecider_to_family,
)
from .life import PatternSyntaxError, advance, format_pattern, life_run, parse_pattern
from .machine import MachineSemanticError, MachineSyntaxError, MalformedEncodingError, as_word
from .simulator import DEFAULT_BUDGET, run, trace, write_trace
from .speedup import (
    SpeedupBudgetError,
    SpeedupMismatch,
    TableSizeError,
    load_program,
    speed_up,
    verify_speedup,
)

BUDGET_ENV = "TURINGFAM_BUDGET"
INCONCLUSIVE = {"OutOfBudget", "Exhausted", "Budget"}


class CLIError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        kind = "unknown-command" if "invalid choice" in message else "usage"
        raise CLIError(kind, message)


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    if not raw.isdigit():
        raise CLIError("usage", f"{BUDGET_ENV} must be a non-negative integer, got {raw!r}")
    return int(raw)


class Output:
    def __init__(self, command: str, pretty: bool, stream=None):
        self.command = command
        self.pretty = pretty
        self.stream = stream or sys.stdout

    def emit(self, record: dict) -> None:
        if self.pretty:
            self.stream.write(json.dumps(record, indent=2, sort_keys=True) + "\n")
        else:
            self.stream.write(json.dumps(record, sort_keys=True) + "\n")


def _digest(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p if isinstance(p, bytes) else str(p).encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise CLIError("file", f"cannot read {path}: {e.strerror or e}") from None


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep or not lo.strip().isdigit() or not hi.strip().isdigit():
        raise CLIError("usage", f"range must look like a..b, got {text!r}")
    a, b = int(lo), int(hi)
    if a > b:
        raise CLIError("usage", f"empty range {text!r}")
    return a, b


# -- commands -----------------------------------------------------------


def cmd_tm_run(args, out):
    src = _read(args.file)
    m = load_program(src)
    budget = args.max_steps if args.max_steps is not None else args.budget
    word = as_word(args.input)
    if args.trace:
        configs = trace(m, word, budget)
        with open(args.trace, "w", encoding="utf-8") as fh:
            write_trace(m, configs, fh)
    r = run(m, word, budget)
    return {
        "input_digest": _digest("tm run", src, args.input, budget),
        "verdict": r.verdict.value,
        "steps": r.steps,
        "payload": {"budget": budget, "final_state": str(r.final.state), "heads": list(r.final.heads)},
    }


def cmd_tm_speedup(args, out):
    src = _read(args.file)
    fast = speed_up(load_program(src), args.C)
    text = fast.description_bytes()
    try:
        Path(args.output).write_bytes(text)
    except OSError as e:
        raise CLIError("file", f"cannot write {args.output}: {e.strerror or e}") from None
    return {
        "input_digest": _digest("tm speedup", src, args.C),
        "verdict": "Transformed",
        "steps": 0,
        "payload": {
            "C": args.C,
            "block": fast.m,
            "tapes": fast.tape_count,
            "output": args.output,
            "description_sha256": hashlib.sha256(text).hexdigest(),
        },
    }


def cmd_tm_speedup_verify(args, out):
    orig_src, fast_src = _read(args.orig), _read(args.fast)
    orig, fast = load_program(orig_src), load_program(fast_src)
    alphabet = list(args.alphabet) if args.alphabet else None
    report = verify_speedup(orig, fast, args.C, args.max_len, alphabet, args.budget)
    for rec in report.records():
        out.emit(rec)
    records = report.records()
    return {
        "input_digest": _digest("tm speedup-verify", orig_src, fast_src, args.C, args.max_len, args.alphabet),
        "verdict": "Verified" if all(r["pass"] for r in records) else "Failed",
        "steps": sum(p.t_fast for p in report.pairs),
        "payload": {
            "C": args.C,
            "max_len": args.max_len,
            "inputs": len(report.pairs),
            "c_M": report.c_M,
            "slack_by_length": {str(k): v for k, v in report.slack_by_length().items()},
        },
    }


def _dovetail_record(result, digest, extra):
    if isinstance(result, Accept):
        verdict, payload = "Accept", {"k": result.k, "member_steps": result.member_steps}
    else:
        verdict, payload = "Exhausted", {"k_max": result.k_max, "budget": result.budget}
    payload["violations"] = list(result.violations)
    payload.update(extra)
    return {"input_digest": digest, "verdict": verdict, "steps": result.total_steps, "payload": payload}


def cmd_family_halting(args, out):
    src = _read(args.machine)
    program = load_program(src)
    if not hasattr(program, "states"):
        raise CLIError("usage", "the halting family takes a plain machine program")
    z = encode_pair(program, args.input)
    result = dovetail_solve(halting_family(), z, args.budget, args.k_max)
    return _dovetail_record(
        result, _digest("family halting", src, args.input, args.k_max, args.budget), {"family": "halting"}
    )


def cmd_dovetail(args, out):
    name = args.family
    if name == "halting":
        if not args.machine:
            raise CLIError("usage", "--family halting needs --machine")
        src = _read(args.machine)
        x = encode_pair(load_program(src), args.input)
        f = halting_family()
        digest = _digest("dovetail", name, src, args.input, args.k_max, args.budget)
    elif name == "dio":
        if not args.equation:
            raise CLIError("usage", "--family dio needs --equation")
        E = parse_equation(args.equation)
        f = semidecider_to_family(lambda _x: equation_to_machine(E), f"dio[{args.equation}]")
        x = None
        digest = _digest("dovetail", name, args.equation, args.k_max, args.budget)
    elif name in corpus.FAMILIES:
        f = corpus.FAMILIES[name]()
        try:
            x = int(args.input)
        except ValueError:
            raise CLIError("usage", f"family {name!r} takes a natural-number input") from None
        digest = _digest("dovetail", name, args.input, args.k_max, args.budget)
    else:
        raise CLIError("usage", f"unknown family {name!r}")
    result = dovetail_solve(f, x, args.budget, args.k_max)
    return _dovetail_record(result, digest, {"family": name})


def cmd_family_check(args, out):
    name = args.family
    if name not in corpus.FAMILIES:
        raise CLIError("usage", f"unknown family {name!r}; known: {', '.join(sorted(corpus.FAMILIES))}")
    lo, hi = _range(args.range)
    k_lo, k_hi = _range(args.k_range)
    lang = corpus.LANGUAGES[name]()
    samples = list(lang.samples)
    if name == "halting":
        samples = samples[lo:hi + 1]
    else:
        samples = [x for x in samples if lo <= x <= hi] or list(range(lo, hi + 1))
    lang = type(lang)(lang.name, lang.oracle, samples)
    report = check_conditions(corpus.FAMILIES[name](), lang, (k_lo, k_hi), args.budget)
    ok = report.condition_i and report.condition_ii and report.condition_iv
    return {
        "input_digest": _digest("family check", name, args.range, args.k_range, args.budget),
        "verdict": "Compliant" if ok else "Violations",
        "steps": sum(report.steps.values()),
        "payload": {"family": name, "conditions": report.records()},
    }


def cmd_life_run(args, out):
    src = _read(args.pattern)
    try:
        grid = parse_pattern(src.decode("utf-8"))
    except UnicodeDecodeError:
        raise CLIError("syntax", f"{args.pattern} is not UTF-8") from None
    max_gens = args.max_gens if args.max_gens is not None else args.budget
    if args.dump_every:
        dump_dir = Path(args.dump_dir or ".")
        dump_dir.mkdir(parents=True, exist_ok=True)
        g = grid
        for gen in range(0, max_gens + 1, args.dump_every):
            (dump_dir / f"gen{gen:06d}.rle").write_text(format_pattern(g))
            g = advance(g, args.dump_every)
    result = life_run(grid, max_gens)
    payload = result.record()
    verdict = payload.pop("verdict")
    return {
        "input_digest": _digest("life run", src, max_gens),
        "verdict": verdict,
        "steps": result.generation,
        "payload": payload,
    }


def cmd_dio_solve(args, out):
    E = parse_equation(args.equation)
    r = solve(E, args.budget)
    if isinstance(r, Solution):
        verdict, payload = "Solution", {"tuple": list(r.values), "index": r.index}
    else:
        verdict, payload = "Exhausted", {"budget": r.budget}
    payload["variables"] = list(E.variables)
    return {
        "input_digest": _digest("dio solve", args.equation, args.budget),
        "verdict": verdict,
        "steps": r.steps,
        "payload": payload,
    }


# -- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    # SUPPRESS keeps a subcommand's defaults from clobbering flags given earlier
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help=f"step budget (default ${BUDGET_ENV} or 10^6)")
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent the JSON records")

    root = _Parser(prog="turingfam", parents=[common], description=__doc__)
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    tm = groups.add_parser("tm", help="machine programs").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = tm.add_parser("run", parents=[common])
    p.add_argument("file")
    p.add_argument("--input", default="")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--trace")
    p.set_defaults(func=cmd_tm_run, command="tm run")

    p = tm.add_parser("speedup", parents=[common])
    p.add_argument("file")
    p.add_argument("-C", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_tm_speedup, command="tm speedup")

    p = tm.add_parser("speedup-verify", parents=[common])
    p.add_argument("orig")
    p.add_argument("fast")
    p.add_argument("-C", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--alphabet", help="input symbols, one character each (default: all non-blank)")
    p.set_defaults(func=cmd_tm_speedup_verify, command="tm speedup-verify")

    fam = groups.add_parser("family", help="machine families").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = fam.add_parser("halting", parents=[common])
    p.add_argument("--machine", required=True)
    p.add_argument("--input", default="")
    p.add_argument("--k-max", type=int, default=1000)
    p.set_defaults(func=cmd_family_halting, command="family halting")

    p = fam.add_parser("check", parents=[common])
    p.add_argument("--family", required=True)
    p.add_argument("--range", required=True)
    p.add_argument("--k-range", default="0..30")
    p.set_defaults(func=cmd_family_check, command="family check")

    p = groups.add_parser("dovetail", parents=[common], help="dovetail a family on one input")
    p.add_argument("--family", required=True)
    p.add_argument("--machine")
    p.add_argument("--equation")
    p.add_argument("--input", default="")
    p.add_argument("--k-max", type=int, default=1000)
    p.set_defaults(func=cmd_dovetail, command="dovetail")

    life = groups.add_parser("life", help="Game of Life").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = life.add_parser("run", parents=[common])
    p.add_argument("pattern")
    p.add_argument("--max-gens", type=int)
    p.add_argument("--dump-every", type=int)
    p.add_argument("--dump-dir")
    p.set_defaults(func=cmd_life_run, command="life run")

    dio = groups.add_parser("dio", help="Diophantine search").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = dio.add_parser("solve", parents=[common])
    p.add_argument("equation")
    p.set_defaults(func=cmd_dio_solve, command="dio solve")
    return root


_ERROR_KINDS = (
    (CLIError, None),
    (MachineSyntaxError, "syntax"),
    (EquationSyntaxError, "syntax"),
    (PatternSyntaxError, "syntax"),
    (MachineSemanticError, "semantic"),
    (MalformedEncodingError, "encoding"),
    (SpeedupMismatch, "mismatch"),
    (SpeedupBudgetError, "budget"),
    (TableSizeError, "resource"),
)


def dispatch(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    command = " ".join(a for a in argv[:2] if not a.startswith("-")) or "turingfam"
    pretty = "--pretty" in argv
    out = Output(command, pretty, stream)
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        command = out.command = args.command
        if getattr(args, "budget", None) is None:
            args.budget = default_budget()
        if args.budget < 0:
            raise CLIError("usage", "--budget must be non-negative")
        record = args.func(args, out)
    except Exception as e:
        for cls, kind in _ERROR_KINDS:
            if isinstance(e, cls):
                kind = kind or e.kind
                break
        else:
            raise
        out.emit({"command": command, "error": {"kind": kind, "message": str(e)}})
        return 1
    record = {"command": command, "wall_time": round(time.perf_counter() - start, 6), **record}
    out.emit(record)
    return 2 if record["verdict"] in INCONCLUSIVE else 0


def main():  # pragma: no cover
    sys.exit(dispatch())


if __name__ == "__main__":  # pragma: no cover
    main()
