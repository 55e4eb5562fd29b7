"""Soup dynamics: random collisions over a constant-size population.

Each collision applies element A to element B. Products that reach
normal form replace one uniformly chosen element, so the population
never changes size. Amplifier elements short-circuit this: as the
argument they eagerly fail (they are too large to reduce anyway, per
the eager-fail optimization), and as the function they run their unit
test against B, multiplying B on a pass and reinserting themselves on
a fail.

Everything downstream of the RNG is pure, so a soup's whole trajectory
is a function of (population spec, seed). Reduction results are memoized
per soup; converged soups hit the memo almost always, which is what
makes million-collision runs affordable.
"""

from __future__ import annotations

import logging
from array import array
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

import numpy as np

from . import kernel
from .amplifier import AmplifierResult, AmplifierSpec, Verdict, evaluate_candidate_code
from .reduce import DEFAULT_LIMITS, ReductionLimits
from .terms import TAG_APP, LambdaExpr, decode, encode

__all__ = [
    "Schedules",
    "Molecule",
    "Amplifier",
    "SoupElement",
    "Reaction",
    "AmplifiedReaction",
    "FailedCollision",
    "EagerFail",
    "CollisionOutcome",
    "Molecules",
    "RandomMolecules",
    "Amplifiers",
    "PopulationEntry",
    "RandomExprParams",
    "RandomExpressionError",
    "random_expression",
    "Soup",
    "init_soup",
]

logger = logging.getLogger(__name__)

_APP = array("i", [TAG_APP]).tobytes()

# memo bounds; on overflow the whole table is dropped (results are pure,
# so eviction cannot change a trajectory)
_PAIR_CACHE_MAX = 1 << 17
_EVAL_CACHE_MAX = 1 << 16

_DRAW_BATCH = 4096


@dataclass(frozen=True, slots=True)
class Schedules:
    """When to measure and when to replenish amplifiers, in collisions."""

    measure_every: int = 1000
    perturb_every: int = 100_000

    def __post_init__(self):
        if self.measure_every <= 0 or self.perturb_every <= 0:
            raise ValueError("schedule intervals must be positive")


DEFAULT_SCHEDULES = Schedules()


@dataclass(frozen=True, slots=True)
class Molecule:
    """A normal-form expression living in the soup."""

    expr: LambdaExpr


@dataclass(frozen=True, slots=True)
class Amplifier:
    """An amplifier element; behavior comes from its spec."""

    spec: AmplifierSpec


SoupElement = Union[Molecule, Amplifier]


@dataclass(frozen=True, slots=True)
class Reaction:
    """One product in, one element out. Fields hold the soup's internal
    representation: molecule code bytes or an AmplifierSpec."""

    product: Union[bytes, AmplifierSpec]
    removed: Union[bytes, AmplifierSpec]


@dataclass(frozen=True, slots=True)
class AmplifiedReaction:
    """factor copies of the candidate in, as many elements out."""

    product: bytes
    count: int
    removed: tuple


@dataclass(frozen=True, slots=True)
class FailedCollision:
    """No reaction; reason is the limit hit ("step-limit", "size-limit")."""

    reason: str


@dataclass(frozen=True, slots=True)
class EagerFail:
    """Skipped without reducing: the argument was an amplifier."""


CollisionOutcome = Union[Reaction, AmplifiedReaction, FailedCollision, EagerFail]


@dataclass(frozen=True, slots=True)
class RandomExprParams:
    """Knobs for random expression generation."""

    min_size: int = 10
    max_size: int = 50
    abstraction_prob: float = 0.4
    max_attempts: int = 100

    def __post_init__(self):
        if not 2 <= self.min_size <= self.max_size:
            raise ValueError("need 2 <= min_size <= max_size")
        if not 0.0 <= self.abstraction_prob <= 1.0:
            raise ValueError("abstraction_prob is a probability")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")


class RandomExpressionError(RuntimeError):
    """No sampled expression reached normal form within the attempt budget."""


@dataclass(frozen=True, slots=True)
class Molecules:
    """Population entry: `count` copies (or a `fraction`) of one expression."""

    expr: LambdaExpr
    count: Optional[int] = None
    fraction: Optional[float] = None


@dataclass(frozen=True, slots=True)
class RandomMolecules:
    """Population entry: independently sampled random expressions."""

    params: RandomExprParams = RandomExprParams()
    count: Optional[int] = None
    fraction: Optional[float] = None


@dataclass(frozen=True, slots=True)
class Amplifiers:
    """Population entry: a family of amplifier specs, cycled round-robin."""

    specs: tuple[AmplifierSpec, ...]
    count: Optional[int] = None
    fraction: Optional[float] = None


PopulationEntry = Union[Molecules, RandomMolecules, Amplifiers]


def _random_tree(budget: int, binders: int, rng: np.random.Generator, p_abs: float) -> LambdaExpr:
    from .terms import App, Lam, Var

    if binders == 0:
        # nothing to reference yet; stay closed
        return Lam(_random_tree(budget - 1, 1, rng, p_abs))
    if budget <= 1:
        return Var(int(rng.integers(0, binders)))
    if rng.random() < p_abs:
        return Lam(_random_tree(budget - 1, binders + 1, rng, p_abs))
    left = int(rng.integers(1, budget - 1)) if budget > 2 else 1
    return App(
        _random_tree(left, binders, rng, p_abs),
        _random_tree(budget - 1 - left, binders, rng, p_abs),
    )


def _random_nf_code(
    params: RandomExprParams, rng: np.random.Generator, limits: ReductionLimits
) -> bytes:
    for _ in range(params.max_attempts):
        target = int(rng.integers(params.min_size, params.max_size + 1))
        expr = _random_tree(target, 0, rng, params.abstraction_prob)
        code, _ = encode(expr)
        status, out, _ = kernel.reduce_code(code, limits.max_steps, limits.max_vertices)
        if status == kernel.NORMAL:
            return out
    raise RandomExpressionError(
        f"no normal form in {params.max_attempts} attempts; params {params}"
    )


def random_expression(
    params: RandomExprParams,
    rng: np.random.Generator,
    limits: ReductionLimits = DEFAULT_LIMITS,
) -> LambdaExpr:
    """A closed normal-form expression sampled via a random binary tree.

    Trees that fail to normalize under the limits are resampled, up to
    params.max_attempts, then RandomExpressionError is raised.
    """
    return decode(_random_nf_code(params, rng, limits))


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def _resolve_counts(entries: list[PopulationEntry], size: int) -> list[int]:
    """Integer count per entry; fractions share the remainder by largest
    remainder, and everything must add up to exactly `size`."""
    explicit = 0
    fractional: list[tuple[int, float]] = []
    counts = [0] * len(entries)
    for i, entry in enumerate(entries):
        has_count = entry.count is not None
        has_fraction = entry.fraction is not None
        if has_count == has_fraction:
            raise ValueError("each population entry takes a count or a fraction, not both")
        if has_count:
            if entry.count < 0:
                raise ValueError("counts are nonnegative")
            counts[i] = int(entry.count)
            explicit += counts[i]
        else:
            if entry.fraction < 0:
                raise ValueError("fractions are nonnegative")
            fractional.append((i, float(entry.fraction)))
    if explicit > size:
        raise ValueError(f"explicit counts ({explicit}) exceed soup size ({size})")
    remainder = size - explicit
    if not fractional:
        if remainder:
            raise ValueError(f"population covers {explicit} of {size} elements")
        return counts
    total = sum(f for _, f in fractional)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"fractions sum to {total!r}, not 1")
    quotas = [(i, f * remainder) for i, f in fractional]
    floors = 0
    for i, q in quotas:
        counts[i] = int(q)
        floors += int(q)
    leftovers = sorted(quotas, key=lambda iq: iq[1] - int(iq[1]), reverse=True)
    for i, _ in leftovers[: remainder - floors]:
        counts[i] += 1
    return counts


class Soup:
    """A constant-size population of molecules and amplifiers.

    Build with init_soup. Slots hold molecule codes (bytes) or shared
    AmplifierSpec objects; per-species counts are maintained
    incrementally so measurements never scan the population.
    """

    def __init__(
        self,
        slots: list,
        rng: np.random.Generator,
        limits: ReductionLimits = DEFAULT_LIMITS,
    ):
        if len(slots) < 2:
            raise ValueError("a soup needs at least two elements")
        self._slots = slots
        self.rng = rng
        self.limits = limits
        self.collisions = 0
        self.warnings: list[str] = []
        self.molecule_counts: dict[bytes, int] = {}
        self.amplifier_counts: dict[AmplifierSpec, int] = {}
        self._amp_total = 0
        for element in slots:
            self._count_in(element)
        # replenishment restores these targets
        self.initial_amplifier_counts = dict(self.amplifier_counts)
        self._draws: list[int] = []
        self._next_draw = 0
        self._pair_cache: dict[tuple[bytes, bytes], tuple[int, Optional[bytes]]] = {}
        self._eval_cache: dict[tuple[int, bytes], AmplifierResult] = {}
        max_factor = max(
            (s.amplification_factor for s in self.amplifier_counts), default=1
        )
        if max_factor > len(slots):
            raise ValueError(
                f"amplification factor {max_factor} cannot fit in a soup of {len(slots)}"
            )

    @property
    def size(self) -> int:
        return len(self._slots)

    def contents(self) -> Iterator[SoupElement]:
        """Decoded view of the population, slot by slot."""
        for element in self._slots:
            if type(element) is bytes:
                yield Molecule(decode(element))
            else:
                yield Amplifier(element)

    def molecule_count(self, ref: Union[bytes, LambdaExpr]) -> int:
        code = ref if type(ref) is bytes else encode(ref)[0]
        return self.molecule_counts.get(code, 0)

    def amplifier_count(self, spec: AmplifierSpec) -> int:
        return self.amplifier_counts.get(spec, 0)

    # -- bookkeeping ---------------------------------------------------

    def _count_in(self, element) -> None:
        if type(element) is bytes:
            self.molecule_counts[element] = self.molecule_counts.get(element, 0) + 1
        else:
            self.amplifier_counts[element] = self.amplifier_counts.get(element, 0) + 1
            self._amp_total += 1

    def _count_out(self, element) -> None:
        if type(element) is bytes:
            left = self.molecule_counts[element] - 1
            if left:
                self.molecule_counts[element] = left
            else:
                del self.molecule_counts[element]
        else:
            left = self.amplifier_counts[element] - 1
            if left:
                self.amplifier_counts[element] = left
            else:
                del self.amplifier_counts[element]
            self._amp_total -= 1

    def _replace(self, slot: int, element):
        old = self._slots[slot]
        self._count_out(old)
        self._slots[slot] = element
        self._count_in(element)
        return old

    def _slot(self) -> int:
        i = self._next_draw
        if i == len(self._draws):
            self._draws = self.rng.integers(0, len(self._slots), size=_DRAW_BATCH).tolist()
            i = 0
        self._next_draw = i + 1
        return self._draws[i]

    # -- reduction memos -----------------------------------------------

    def _apply_molecules(self, a: bytes, b: bytes) -> tuple[int, Optional[bytes]]:
        key = (a, b)
        hit = self._pair_cache.get(key)
        if hit is None:
            limits = self.limits
            status, out, _ = kernel.reduce_code(
                _APP + a + b, limits.max_steps, limits.max_vertices
            )
            hit = (status, out)
            if len(self._pair_cache) >= _PAIR_CACHE_MAX:
                self._pair_cache.clear()
            self._pair_cache[key] = hit
        return hit

    def _evaluate(self, spec: AmplifierSpec, candidate: bytes) -> AmplifierResult:
        key = (id(spec), candidate)
        hit = self._eval_cache.get(key)
        if hit is None:
            hit = evaluate_candidate_code(spec, candidate, self.limits)
            if len(self._eval_cache) >= _EVAL_CACHE_MAX:
                self._eval_cache.clear()
            self._eval_cache[key] = hit
        return hit

    # -- dynamics --------------------------------------------------------

    def collide(self) -> CollisionOutcome:
        """One collision: draw distinct slots A and B, apply A to B."""
        a = self._slot()
        b = self._slot()
        while b == a:
            b = self._slot()
        self.collisions += 1
        fn = self._slots[a]
        arg = self._slots[b]
        if type(arg) is not bytes:
            return EagerFail()
        if type(fn) is not bytes:
            result = self._evaluate(fn, arg)
            if result.verdict is Verdict.PASS:
                count = fn.amplification_factor
                removed = []
                taken: set[int] = set()
                for _ in range(count):
                    v = self._slot()
                    while v in taken:
                        v = self._slot()
                    taken.add(v)
                    removed.append(self._replace(v, arg))
                return AmplifiedReaction(arg, count, tuple(removed))
            if result.verdict is Verdict.FAIL:
                old = self._replace(self._slot(), fn)
                return Reaction(fn, old)
            return FailedCollision(result.reason)
        status, product = self._apply_molecules(fn, arg)
        if status == kernel.NORMAL:
            old = self._replace(self._slot(), product)
            return Reaction(product, old)
        reason = "step-limit" if status == kernel.STEP_LIMIT else "size-limit"
        return FailedCollision(reason)

    def perturb(self) -> int:
        """Top every amplifier spec back up to its initial count, each new
        copy replacing a uniformly chosen molecule. Never removes surplus."""
        added = 0
        for spec, want in self.initial_amplifier_counts.items():
            have = self.amplifier_counts.get(spec, 0)
            for _ in range(want - have):
                if self._amp_total >= len(self._slots):
                    msg = (
                        f"perturbation at collision {self.collisions} ran out of "
                        f"molecules to replace; restored {added} amplifiers"
                    )
                    self.warnings.append(msg)
                    logger.warning(msg)
                    return added
                v = self._slot()
                while type(self._slots[v]) is not bytes:
                    v = self._slot()
                self._replace(v, spec)
                added += 1
        return added

    def run(
        self,
        total_collisions: int,
        schedules: Schedules = DEFAULT_SCHEDULES,
        observer: Optional[Callable[["Soup"], object]] = None,
    ) -> list:
        """Collide total_collisions times, measuring and perturbing on
        schedule (measurement first when both fall on the same collision)."""
        if total_collisions < 0:
            raise ValueError("total_collisions must be nonnegative")
        records = []
        measure_every = schedules.measure_every
        perturb_every = schedules.perturb_every
        collide = self.collide
        for _ in range(total_collisions):
            collide()
            done = self.collisions
            if observer is not None and done % measure_every == 0:
                records.append(observer(self))
            if done % perturb_every == 0:
                self.perturb()
        return records


def init_soup(
    population: list[PopulationEntry],
    size: int,
    seed,
    limits: ReductionLimits = DEFAULT_LIMITS,
) -> Soup:
    """Fill a soup of exactly `size` elements from population entries.

    Fractions are resolved over whatever the explicit counts leave, by
    largest-remainder rounding. Amplifier families spread their count
    over the family's specs round-robin. The RNG used to sample random
    molecules is the same one that will drive the dynamics.
    """
    if size <= 0:
        raise ValueError("soup size must be positive")
    rng = _as_generator(seed)
    counts = _resolve_counts(population, size)
    slots: list = []
    for entry, count in zip(population, counts):
        if isinstance(entry, Molecules):
            code, names = encode(entry.expr)
            if names:
                raise ValueError("soup molecules must be closed")
            if not kernel.is_normal(code):
                raise ValueError("soup molecules must be in normal form")
            slots.extend([code] * count)
        elif isinstance(entry, RandomMolecules):
            for _ in range(count):
                slots.append(_random_nf_code(entry.params, rng, limits))
        else:
            if not entry.specs:
                raise ValueError("amplifier entry with no specs")
            for i in range(count):
                slots.append(entry.specs[i % len(entry.specs)])
    return Soup(slots, rng, limits)
