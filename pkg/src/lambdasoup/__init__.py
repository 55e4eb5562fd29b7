"""Algorithmic chemistry over the untyped lambda calculus.

Expressions collide by application, products join the soup, and
amplifier elements carrying embedded unit tests multiply whatever
passes, steering the population toward target functions.
"""

__version__ = "0.1.0"

from .kernel import BACKEND as KERNEL_BACKEND
from .parser import LambdaSyntaxError, UnboundVariableError, parse, to_text
from .reduce import (
    DEFAULT_LIMITS,
    NormalForm,
    ReductionLimits,
    ReductionOutcome,
    SizeLimitExceeded,
    StepLimitExceeded,
    apply_and_reduce,
    reduce_to_normal_form,
)
from .stdlib import Combinator, church, combinator, decode_church
from .terms import App, Lam, LambdaExpr, Var, alpha_equivalent, size

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "Var",
    "Lam",
    "App",
    "LambdaExpr",
    "alpha_equivalent",
    "size",
    "parse",
    "to_text",
    "LambdaSyntaxError",
    "UnboundVariableError",
    "ReductionLimits",
    "DEFAULT_LIMITS",
    "NormalForm",
    "StepLimitExceeded",
    "SizeLimitExceeded",
    "ReductionOutcome",
    "reduce_to_normal_form",
    "apply_and_reduce",
    "Combinator",
    "combinator",
    "church",
    "decode_church",
]
