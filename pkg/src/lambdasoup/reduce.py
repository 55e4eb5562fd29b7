"""Resource-bounded normal-order reduction of expression trees.

Reduction always terminates: it stops at the normal form, after a fixed
number of beta steps, or the first time the whole term grows past a
vertex cap. Index bookkeeping during substitution is free; only beta
contractions count against the step budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import kernel
from .terms import App, LambdaExpr, decode, encode

__all__ = [
    "ReductionLimits",
    "DEFAULT_LIMITS",
    "NormalForm",
    "StepLimitExceeded",
    "SizeLimitExceeded",
    "ReductionOutcome",
    "reduce_to_normal_form",
    "apply_and_reduce",
]


@dataclass(frozen=True, slots=True)
class ReductionLimits:
    """Budgets for one reduction; both must be positive."""

    max_steps: int = 8000
    max_vertices: int = 1000

    def __post_init__(self):
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.max_vertices <= 0:
            raise ValueError("max_vertices must be positive")


DEFAULT_LIMITS = ReductionLimits()


@dataclass(frozen=True, slots=True)
class NormalForm:
    """Reduction reached a normal form."""

    expr: LambdaExpr
    steps_used: int


@dataclass(frozen=True, slots=True)
class StepLimitExceeded:
    """A redex remained after the full step budget."""


@dataclass(frozen=True, slots=True)
class SizeLimitExceeded:
    """A beta step grew the term past the vertex cap."""


ReductionOutcome = Union[NormalForm, StepLimitExceeded, SizeLimitExceeded]


def reduce_to_normal_form(
    expr: LambdaExpr, limits: ReductionLimits = DEFAULT_LIMITS
) -> ReductionOutcome:
    code, names = encode(expr)
    status, out, steps = kernel.reduce_code(code, limits.max_steps, limits.max_vertices)
    if status == kernel.NORMAL:
        return NormalForm(decode(out, names), steps)
    if status == kernel.STEP_LIMIT:
        return StepLimitExceeded()
    return SizeLimitExceeded()


def apply_and_reduce(
    fn: LambdaExpr, arg: LambdaExpr, limits: ReductionLimits = DEFAULT_LIMITS
) -> ReductionOutcome:
    """Reduce (fn arg); the collision primitive."""
    return reduce_to_normal_form(App(fn, arg), limits)
