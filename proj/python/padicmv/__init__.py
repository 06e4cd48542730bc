"""Exponential-sum mean values over real and p-adic domains."""

from ._padicmv import (
    InvalidInput,
    ResourceError,
    UnsupportedPrime,
    count_solutions,
    counterexample,
    hensel_sqrt_minus_one,
    mv_padic,
    mv_real,
    phase_system,
    run_cli,
    trace_powers,
    transfer_check,
)

__all__ = [
    "InvalidInput",
    "ResourceError",
    "UnsupportedPrime",
    "count_solutions",
    "counterexample",
    "hensel_sqrt_minus_one",
    "mv_padic",
    "mv_real",
    "phase_system",
    "run_cli",
    "trace_powers",
    "transfer_check",
]
