"""Concolic test-case generation for definite logic programs."""

from .concrete import Outcome, OutcomeKind, run
from .engine import EngineConfig, Mode, TestSuite, drive
from .parser import ParseError, parse_atom, parse_program
from .report import render_report

__all__ = [
    "EngineConfig", "Mode", "Outcome", "OutcomeKind", "ParseError", "TestSuite",
    "drive", "parse_atom", "parse_program", "render_report", "run",
]
