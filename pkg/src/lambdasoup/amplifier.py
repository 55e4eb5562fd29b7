"""Amplifier test functions.

An amplifier carries an embedded unit test `\\f. eq (f i1 ... ik) e`.
Applied to a candidate, the test either reduces to true (the candidate
is worth multiplying), reduces to anything else (fail), or runs out of
budget (inert). Three structural heuristics screen out trickster
candidates before the test is even run.

The test expression is stored as written, not pre-normalized: unfolding
eq ahead of time duplicates the candidate hole and makes large tests
exceed the vertex cap sooner, and for wide input pairs the unfolded
form has no normal form under the default cap at all.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from . import kernel
from .reduce import DEFAULT_LIMITS, ReductionLimits
from .stdlib import Combinator, church, combinator
from .terms import App, Lam, LambdaExpr, TAG_APP, Var, encode

__all__ = [
    "UnitTest",
    "make_unit_test",
    "FilterPolicy",
    "AmplifierSpec",
    "Verdict",
    "AmplifierResult",
    "passes_filters",
    "evaluate_candidate",
    "evaluate_candidate_code",
    "successor_family",
    "add_two_family",
    "addition_family",
]

_APP = array("i", [TAG_APP]).tobytes()


@dataclass(frozen=True, slots=True)
class FilterPolicy:
    """Which trickster heuristics to apply; all on by default."""

    require_arity: bool = True
    require_argument_use: bool = True
    reject_wrapped_booleans: bool = True


DEFAULT_FILTERS = FilterPolicy()


@dataclass(frozen=True, slots=True)
class UnitTest:
    """One embedded test: apply the candidate to inputs, expect a numeral.

    Identity is (inputs, expected); the expression and its code are
    derived and cached.
    """

    inputs: tuple[int, ...]
    expected: int
    test_expr: LambdaExpr = field(compare=False, repr=False)
    code: bytes = field(compare=False, repr=False)

    @property
    def arity(self) -> int:
        return len(self.inputs)


def make_unit_test(inputs: Sequence[int], expected: int) -> UnitTest:
    """Build the test `\\f. eq (f i1 ... ik) e` for the given constants."""
    seq = tuple(int(i) for i in inputs)
    if not 1 <= len(seq) <= 2:
        raise ValueError("unit tests take one or two inputs")
    expected = int(expected)
    if expected < 0 or any(i < 0 for i in seq):
        raise ValueError("test constants are naturals")
    applied: LambdaExpr = Var(0)
    for value in seq:
        applied = App(applied, church(value))
    expr = Lam(App(App(combinator(Combinator.EQ), applied), church(expected)))
    code, names = encode(expr)
    assert not names, "test expressions are closed by construction"
    return UnitTest(seq, expected, expr, code)


@dataclass(frozen=True, slots=True)
class AmplifierSpec:
    """An amplifier element: a unit test plus how many copies a pass earns.

    Two specs are the same amplifier exactly when their tests match; the
    id, factor and filters are operational settings, not identity.
    """

    test: UnitTest
    amplification_factor: int = field(default=100, compare=False)
    filters: FilterPolicy = field(default=DEFAULT_FILTERS, compare=False)
    id: str = field(default="", compare=False)

    def __post_init__(self):
        if self.amplification_factor < 1:
            raise ValueError("amplification_factor must be at least 1")
        if not self.id:
            args = ",".join(str(i) for i in self.test.inputs)
            object.__setattr__(self, "id", f"test({args})={self.test.expected}")


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    INERT = "inert"


@dataclass(frozen=True, slots=True)
class AmplifierResult:
    """Outcome of one candidate evaluation.

    reason names the rejecting filter, the non-true normal form, or the
    exceeded limit; candidate is set on PASS.
    """

    verdict: Verdict
    candidate: Optional[LambdaExpr] = None
    reason: Optional[str] = None


def _filter_rejection(code: bytes, arity: int, policy: FilterPolicy) -> Optional[str]:
    if policy.require_arity and kernel.leading_lams(code) < arity:
        return "arity"
    if policy.require_argument_use and kernel.missing_argument(code, arity):
        return "argument-use"
    if policy.reject_wrapped_booleans and kernel.wrapped_boolean(code):
        return "wrapped-boolean"
    return None


def passes_filters(
    candidate: LambdaExpr, arity: int, policy: FilterPolicy = DEFAULT_FILTERS
) -> Optional[str]:
    """None when the candidate survives the enabled heuristics, else the
    name of the rejecting one ("arity", "argument-use", "wrapped-boolean")."""
    code, _ = encode(candidate)
    return _filter_rejection(code, arity, policy)


_TRUE_CODE = encode(combinator(Combinator.TRUE))[0]
_FALSE_CODE = encode(combinator(Combinator.FALSE))[0]


def evaluate_candidate_code(
    spec: AmplifierSpec, code: bytes, limits: ReductionLimits = DEFAULT_LIMITS
) -> AmplifierResult:
    """Code-level evaluation; the soup engine's hot path."""
    reason = _filter_rejection(code, spec.test.arity, spec.filters)
    if reason is not None:
        return AmplifierResult(Verdict.FAIL, reason=reason)
    status, out, _ = kernel.reduce_code(
        _APP + spec.test.code + code, limits.max_steps, limits.max_vertices
    )
    if status == kernel.NORMAL:
        if out == _TRUE_CODE:
            return AmplifierResult(Verdict.PASS)
        reason = "false" if out == _FALSE_CODE else "not-boolean"
        return AmplifierResult(Verdict.FAIL, reason=reason)
    reason = "step-limit" if status == kernel.STEP_LIMIT else "size-limit"
    return AmplifierResult(Verdict.INERT, reason=reason)


def evaluate_candidate(
    spec: AmplifierSpec, candidate: LambdaExpr, limits: ReductionLimits = DEFAULT_LIMITS
) -> AmplifierResult:
    """Run the amplifier's test against a normal-form candidate."""
    code, _ = encode(candidate)
    result = evaluate_candidate_code(spec, code, limits)
    if result.verdict is Verdict.PASS:
        return AmplifierResult(Verdict.PASS, candidate=candidate)
    return result


def successor_family(
    values: Sequence[int] = range(21),
    factor: int = 100,
    filters: FilterPolicy = DEFAULT_FILTERS,
) -> list[AmplifierSpec]:
    """Amplifiers testing f(n) = n+1 for each n."""
    return [
        AmplifierSpec(make_unit_test([n], n + 1), factor, filters, id=f"succ-{n}")
        for n in values
    ]


def add_two_family(
    values: Sequence[int] = range(21),
    factor: int = 100,
    filters: FilterPolicy = DEFAULT_FILTERS,
) -> list[AmplifierSpec]:
    """Amplifiers testing f(n) = n+2 for each n."""
    return [
        AmplifierSpec(make_unit_test([n], n + 2), factor, filters, id=f"add2-{n}")
        for n in values
    ]


def addition_family(
    pairs: Optional[Sequence[tuple[int, int]]] = None,
    factor: int = 100,
    filters: FilterPolicy = DEFAULT_FILTERS,
) -> list[AmplifierSpec]:
    """Amplifiers testing f(n, m) = n+m over a grid of pairs."""
    if pairs is None:
        pairs = [(n, m) for n in range(21) for m in range(21)]
    return [
        AmplifierSpec(make_unit_test([n, m], n + m), factor, filters, id=f"add-{n}-{m}")
        for n, m in pairs
    ]
