"""Positive solutions of generalized polynomial systems A (c ∘ x^B) = 0."""

from .framework import (
    ProblemInstance,
    certify_unique_existence,
    certify_uniqueness,
    classify,
    lift_solution,
    parametrization,
    residual,
)
from .io import dump_problem, parse_problem

__all__ = [
    "ProblemInstance",
    "certify_unique_existence",
    "certify_uniqueness",
    "classify",
    "dump_problem",
    "lift_solution",
    "parametrization",
    "parse_problem",
    "residual",
]
