"""Executable workbench for uniform infinite families of Turing machines."""

from .machine import (
    GoedelCode,
    Machine,
    Status,
    TMProgram,
    decode_machine,
    encode_machine,
    parse_machine,
)
from .simulator import bounded_simulate, run, step, trace

__all__ = [
    "GoedelCode",
    "Machine",
    "Status",
    "TMProgram",
    "bounded_simulate",
    "decode_machine",
    "encode_machine",
    "parse_machine",
    "run",
    "step",
    "trace",
]
