"""Structured proofs in elementary set theory."""

from ._core import (
    Session,
    SetproofError,
    alpha_eq,
    check_script,
    equivalent_in_rank,
    free_vars,
    normalize,
    reexpress,
    rules,
    valid_in_rank,
)

__all__ = [
    "Session",
    "SetproofError",
    "alpha_eq",
    "check_script",
    "equivalent_in_rank",
    "free_vars",
    "normalize",
    "reexpress",
    "rules",
    "valid_in_rank",
]
