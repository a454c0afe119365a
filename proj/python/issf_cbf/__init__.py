"""Input-to-state safe control barrier functions."""

from ._core import (
    ComparisonFunction,
    IssfError,
    beta_of,
    check,
    gamma_from,
    integrate,
    invert,
    issf_feedback,
    lie1,
    max_disturbance,
    min_norm_safeguarding,
    simulate,
    solve_qp,
    sweep,
    universal_issf,
    universal_terms,
    validate,
    verify_kkt,
)

__all__ = [
    "ComparisonFunction",
    "IssfError",
    "beta_of",
    "check",
    "gamma_from",
    "integrate",
    "invert",
    "issf_feedback",
    "lie1",
    "max_disturbance",
    "min_norm_safeguarding",
    "simulate",
    "solve_qp",
    "sweep",
    "universal_issf",
    "universal_terms",
    "validate",
    "verify_kkt",
]
