"""Named combinators and Church-numeral arithmetic.

Definitions whose bodies contain redexes (ADD2, EQ) are normalized once
at import, so every combinator handed out is a closed normal form and
can sit in a soup or be counted as a motif directly.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Optional, Union

from .parser import parse
from .reduce import DEFAULT_LIMITS, NormalForm, reduce_to_normal_form
from .terms import App, Lam, LambdaExpr, Var, bind_free

__all__ = ["Combinator", "combinator", "church", "decode_church"]


class Combinator(Enum):
    S = "S"
    K = "K"
    I = "I"
    P = "P"
    TRUE = "TRUE"
    FALSE = "FALSE"
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    SCC = "SCC"
    ADD = "ADD"
    ADD2 = "ADD2"
    PRED = "PRED"
    SUB = "SUB"
    IS_ZERO = "IS_ZERO"
    EQ = "EQ"


# sources may mention earlier entries by name; order matters
_SOURCES: list[tuple[Combinator, str]] = [
    (Combinator.S, r"\x.\y.\z.x z (y z)"),
    (Combinator.K, r"\x.\y.x"),
    (Combinator.I, r"\x.x"),
    (Combinator.P, r"\s.\a.\b.a s b"),
    (Combinator.TRUE, r"\a.\b.a"),
    (Combinator.FALSE, r"\a.\b.b"),
    (Combinator.AND, r"\a.\b.a b a"),
    (Combinator.OR, r"\a.\b.a a b"),
    (Combinator.NOT, r"\a.a FALSE TRUE"),
    (Combinator.SCC, r"\n.\a.\b.a (n a b)"),
    (Combinator.ADD, r"\n.\m.n SCC m"),
    (Combinator.ADD2, r"\n.SCC (SCC n)"),
    (Combinator.PRED, r"\n.\f.\x.n (\g.\h.h (g f)) (\u.x) (\u.u)"),
    (Combinator.SUB, r"\m.\n.n PRED m"),
    (Combinator.IS_ZERO, r"\n.n (\x.FALSE) TRUE"),
    (Combinator.EQ, r"\m.\n.AND (ISZERO (SUB m n)) (ISZERO (SUB n m))"),
]


def _build() -> dict[Combinator, LambdaExpr]:
    table: dict[Combinator, LambdaExpr] = {}
    env: dict[str, LambdaExpr] = {}
    for name, source in _SOURCES:
        expr = bind_free(parse(source), env)
        outcome = reduce_to_normal_form(expr, DEFAULT_LIMITS)
        if not isinstance(outcome, NormalForm):
            raise AssertionError(f"{name.value} has no normal form within limits")
        table[name] = outcome.expr
        # identifiers cannot contain underscores, so IS_ZERO is ISZERO in sources
        env[name.value.replace("_", "")] = outcome.expr
    return table


_TABLE = _build()


def combinator(name: Union[Combinator, str]) -> LambdaExpr:
    """Look up a named combinator; accepts the enum or its name."""
    if isinstance(name, str):
        try:
            name = Combinator[name.upper()]
        except KeyError:
            raise KeyError(f"unknown combinator {name!r}") from None
    return _TABLE[name]


@lru_cache(maxsize=None)
def church(n: int) -> LambdaExpr:
    """The Church numeral for n: \\a.\\b.a (a ... (a b))."""
    if n < 0:
        raise ValueError("Church numerals encode nonnegative integers")
    body: LambdaExpr = Var(0)
    for _ in range(n):
        body = App(Var(1), body)
    return Lam(Lam(body))


def decode_church(expr: LambdaExpr) -> Optional[int]:
    """The n with expr alpha-equivalent to church(n), else None.

    Purely structural; performs no reduction.
    """
    if type(expr) is not Lam or type(expr.body) is not Lam:
        return None
    node = expr.body.body
    n = 0
    while type(node) is App:
        if node.fn != Var(1):
            return None
        node = node.arg
        n += 1
    return n if node == Var(0) else None
