"""Crossover distances computed through lower-set representations.

The directed distance counts the generations needed for every member of the
target population to appear; the symmetric and individual distances are
built on top of it.  Unreachable targets are valued at ``k*``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .genome import Genome, GenomeError, Population, check_population
from .oracle import Semantics
from .poset import LowerSet, agreement_mask, enumerate_scn, mu_saturate

log = logging.getLogger(__name__)


class Reach(str, enum.Enum):
    FINITE = "finite"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class DistanceValue:
    kind: Reach
    generations: int | None
    kstar: int

    @classmethod
    def finite(cls, generations: int, kstar: int) -> DistanceValue:
        return cls(Reach.FINITE, generations, kstar)

    @classmethod
    def unreachable(cls, kstar: int) -> DistanceValue:
        return cls(Reach.UNREACHABLE, None, kstar)

    @property
    def reachable(self) -> bool:
        return self.kind is Reach.FINITE

    @property
    def value(self) -> int:
        """Numeric value: the generation count, or ``k*`` when unreachable."""
        return self.generations if self.kind is Reach.FINITE else self.kstar

    def __str__(self) -> str:
        if self.reachable:
            return str(self.generations)
        return f"Unreachable(k*={self.kstar})"


@dataclass(frozen=True)
class KStarPolicy:
    """``explicit=None`` means the logarithmic default ``ceil(log2 length) + 1``."""

    explicit: int | None = None

    def __post_init__(self):
        if self.explicit is not None and self.explicit < 1:
            raise ValueError(f"explicit k* must be at least 1, got {self.explicit}")

    @classmethod
    def parse(cls, text: str | int | None) -> KStarPolicy:
        if text is None or text == "log" or text == "auto":
            return cls()
        return cls(int(text))

    def __str__(self) -> str:
        return "log" if self.explicit is None else str(self.explicit)


def resolve_kstar(length: int, n: int, policy: KStarPolicy = KStarPolicy()) -> int:
    if length < 1 or n < 1:
        raise ValueError("length and n must be positive")
    if policy.explicit is not None:
        return policy.explicit
    return math.ceil(math.log2(length)) + 1


# largest length for which n >= 2 uses the full power set (2^length - 1 elements)
EXACT_LENGTH_LIMIT = 12


def representation_width(length: int, n: int, width: int | None = None) -> int:
    """Component bound of the poset the engine represents populations in.

    Intervals are enough for one crossover point.  With two or more points a
    sub-union of a represented set may only split into pieces with more than
    ``n`` components, so SC_n can lose reachability information; the full
    power set (``ceil(length / 2)`` components) is exact.  Beyond
    :data:`EXACT_LENGTH_LIMIT` the power set is too large and SC_n is used,
    which can only overestimate the distance.
    """
    if width is not None:
        return min(width, length)
    full = (length + 1) // 2
    if n == 1 or n >= full:
        return min(n, full) if n == 1 else full
    if length <= EXACT_LENGTH_LIMIT:
        return full
    _warn_inexact(length, n)
    return n


@lru_cache(maxsize=None)
def _warn_inexact(length: int, n: int) -> None:
    log.warning("length %d with %d points: using SC_%d, distances are upper bounds", length, n, n)


@lru_cache(maxsize=1 << 18)
def _min_generations(length: int, n: int, width: int, masks: frozenset[int]) -> int | None:
    poset = enumerate_scn(length, width)
    lower = LowerSet.generated_by(poset, masks)
    return mu_saturate(lower, n, stop_at_full=True).first_full


def _maximal(masks: set[int]) -> frozenset[int]:
    return frozenset(m for m in masks if not any(m != o and m & ~o == 0 for o in masks))


def individual_min_generations(x: Genome, pop: Population, n: int, width: int | None = None) -> int | None:
    """Generations until ``x`` can appear starting from ``pop``; ``None`` if never.

    Equal to the first mu iterate of ``r_x(pop)`` that contains ``[1, length]``.
    Results are memoised on the maximal agreement masks, which determine the
    representation completely.
    """
    if not pop:
        raise GenomeError("source population is empty")
    length = len(x)
    if check_population(pop) != length:
        raise GenomeError("genome and population have different lengths")
    if length > 1 and not 1 <= n <= length - 1:
        raise GenomeError(f"number of crossover points must lie in [1, {length - 1}], got {n}")
    if x in pop:
        return 0
    if length == 1:
        return None
    masks = _maximal({agreement_mask(x, y) for y in pop} - {0})
    return _min_generations(length, n, representation_width(length, n, width), masks)


def _check_pair(p1: Population, p2: Population) -> int:
    if not p1 or not p2:
        raise GenomeError("populations must be non-empty")
    return check_population(p1 | p2)


def directed_distance(p1: Population, p2: Population, n: int, policy: KStarPolicy = KStarPolicy(),
                      semantics: Semantics | str = Semantics.CONTAINMENT,
                      width: int | None = None) -> DistanceValue:
    """Generations needed to turn ``p1`` into ``p2`` (a quasi-metric).

    The count is the largest per-member count over ``p2``.  Under closure
    semantics a proper subset of ``p1`` costs one generation.  Counts at or
    beyond ``k*`` are reported as unreachable.
    """
    length = _check_pair(p1, p2)
    semantics = Semantics(semantics)
    kstar = resolve_kstar(length, n, policy)
    if semantics is Semantics.CLOSURE and p2 <= p1:
        g = 0 if p2 == p1 else 1
    else:
        g = 0
        for x in sorted(p2):
            gx = individual_min_generations(x, p1, n, width)
            if gx is None:
                return DistanceValue.unreachable(kstar)
            g = max(g, gx)
    if g >= kstar:
        return DistanceValue.unreachable(kstar)
    return DistanceValue.finite(g, kstar)


def symmetric_distance(p1: Population, p2: Population, n: int, policy: KStarPolicy = KStarPolicy(),
                       semantics: Semantics | str = Semantics.CONTAINMENT,
                       width: int | None = None) -> Fraction:
    there = directed_distance(p1, p2, n, policy, semantics, width)
    back = directed_distance(p2, p1, n, policy, semantics, width)
    return Fraction(there.value + back.value, 2)


def individual_distance(x: Genome, y: Genome, pop: Population, n: int, policy: KStarPolicy = KStarPolicy(),
                        semantics: Semantics | str = Semantics.CONTAINMENT,
                        width: int | None = None) -> Fraction:
    """Distance between ``x`` and ``y`` relative to a background population."""
    if not pop:
        raise GenomeError("background population is empty")
    if len(x) != len(y) or check_population(pop) != len(x):
        raise GenomeError("genomes and population have different lengths")
    if x == y:
        return Fraction(0)
    return symmetric_distance((pop - {x}) | {y}, (pop - {y}) | {x}, n, policy, semantics, width)
