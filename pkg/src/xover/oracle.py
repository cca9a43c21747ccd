"""Brute-force reachability: the sequence S_0(P), S_1(P), ... and exact generation counts.

Everything here works on explicit sets of genomes and is meant as the
reference the representation-based engine is checked against, so the
universe is capped at :data:`ORACLE_LIMIT` genomes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import chain, combinations
from typing import Iterable

import numpy as np

from .genome import (Codec, GenomeError, Population, _children_codes, alphabet_size_for,
                     check_population, offspring_pool)

ORACLE_LIMIT = 65536


class Semantics(str, enum.Enum):
    """How a target that is a proper subset of the source is counted.

    ``closure`` follows the iterated closure literally: staying put takes 0
    steps but dropping members takes one generation.  ``containment`` counts
    the first stage that contains the target, so any subset costs 0.
    """

    CLOSURE = "closure"
    CONTAINMENT = "containment"


class OracleLimitError(GenomeError):
    pass


@dataclass(frozen=True)
class ReachabilitySequence:
    stages: tuple[Population, ...]

    @property
    def fixed_point_index(self) -> int:
        return len(self.stages) - 1

    @property
    def fixed_point(self) -> Population:
        return self.stages[-1]

    def first_stage_containing(self, target: Iterable) -> int | None:
        target = frozenset(target)
        for i, s in enumerate(self.stages):
            if target <= s:
                return i
        return None


def _codec_for(pop: Population, q: int | None) -> Codec:
    length = check_population(pop)
    codec = Codec(length, q or alphabet_size_for(pop))
    if codec.universe > ORACLE_LIMIT:
        raise OracleLimitError(f"universe of {codec.universe} genomes exceeds the oracle limit {ORACLE_LIMIT}")
    return codec


def _stages(pop: Population, n: int, q: int | None, until: frozenset | None = None,
            max_gen: int | None = None) -> tuple[Codec, list[np.ndarray]]:
    """Codes of S_0, S_1, ... (semi-naive: only pairs touching new members are expanded)."""
    if not pop:
        raise GenomeError("reachability from an empty population")
    codec = _codec_for(pop, q)
    seen = np.zeros(codec.universe, dtype=bool)
    cur = codec.encode(pop)
    seen[cur] = True
    stages = [cur]
    want = None if until is None else codec.encode(until)
    new = cur
    while codec.length > 1:
        if want is not None and seen[want].all():
            break
        if max_gen is not None and len(stages) - 1 >= max_gen:
            break
        kids = _children_codes(codec, new, cur, n)
        kids = kids[~seen[kids]]
        if len(kids) == 0:
            break
        seen[kids] = True
        new = kids
        cur = np.flatnonzero(seen)
        stages.append(cur)
    return codec, stages


def s_sequence(pop: Population, n: int, q: int | None = None, max_gen: int | None = None) -> ReachabilitySequence:
    """Stages S_0 = P, S_{i+1} = offspring pool of S_i, up to the first repeat.

    The repeated stage is not stored, so ``stages[-1]`` is the fixed point.
    """
    codec, stages = _stages(pop, n, q, max_gen=max_gen)
    return ReachabilitySequence(tuple(codec.decode(s) for s in stages))


def _min_stage(p1: Population, p2: Population, n: int, q: int | None) -> int | None:
    codec, stages = _stages(p1, n, q, until=p2)
    want = codec.encode(p2)
    last = stages[-1]
    if not np.isin(want, last).all():
        return None
    for i, s in enumerate(stages):
        if np.isin(want, s).all():
            return i
    return None  # pragma: no cover


def _check_pair(p1: Population, p2: Population) -> None:
    if not p1 or not p2:
        raise GenomeError("populations must be non-empty")
    check_population(p1 | p2)


def oracle_min_generations(p1: Population, p2: Population, n: int,
                           semantics: Semantics | str = Semantics.CONTAINMENT,
                           q: int | None = None) -> int | None:
    """Fewest crossover generations from ``p1`` to ``p2``; ``None`` if unreachable."""
    _check_pair(p1, p2)
    semantics = Semantics(semantics)
    q = q or alphabet_size_for(p1 | p2)
    if semantics is Semantics.CLOSURE:
        if p2 == p1:
            return 0
        if p2 < p1:
            return 1
    return _min_stage(p1, p2, n, q)


def oracle_closure_member(p1: Population, p2: Population, k: int, n: int, q: int | None = None) -> bool:
    """Whether ``p2`` lies in the k-th iterated closure of ``{p1}``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    g = oracle_min_generations(p1, p2, n, Semantics.CLOSURE, q)
    return g is not None and g <= k


# ---------------------------------------------------------------------------
# the closure on sets of populations, materialised for tiny universes only


def successors(pop: Population, n: int) -> frozenset[Population]:
    """All populations ``p2`` with ``pop`` related to ``p2`` in one step (every subset of the pool)."""
    pool = sorted(offspring_pool(pop, n)) if pop else []
    if len(pool) > 16:
        raise OracleLimitError("too many successors to materialise")
    return frozenset(frozenset(c) for c in chain.from_iterable(combinations(pool, r) for r in range(len(pool) + 1)))


def closure(family: Iterable[Population], n: int) -> frozenset[Population]:
    """One application of the crossover closure to a set of populations."""
    out: set[Population] = set()
    for pop in family:
        out |= successors(pop, n)
    return frozenset(out)
