"""Circular induction and coinduction prover."""

from ._circlet import (
    ParseError,
    Service,
    Session,
    SessionError,
    check_spec,
    prove,
    run_script,
)

__all__ = [
    "ParseError",
    "Service",
    "Session",
    "SessionError",
    "check_spec",
    "prove",
    "run_script",
]
