"""Genomes, populations and the n-points crossover relations.

A genome is a tuple of alphabet indices; position ``i`` (1-based, as in the
usual notation) lives at tuple index ``i - 1``.  A population is a frozenset of
equal-length genomes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Genome = tuple[int, ...]
Population = frozenset[Genome]


class GenomeError(ValueError):
    """Raised on malformed genomes, populations or crossover arguments."""


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(self.symbols) < 2:
            raise GenomeError("an alphabet needs at least 2 symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise GenomeError(f"duplicate symbols in alphabet {self.symbols!r}")
        if any(len(s) != 1 for s in self.symbols):
            raise GenomeError("alphabet symbols must be single characters")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def parse(self, text: str) -> Genome:
        text = text.strip()
        if not text:
            raise GenomeError("empty genome")
        try:
            return tuple(self.symbols.index(ch) for ch in text)
        except ValueError:
            bad = next(ch for ch in text if ch not in self.symbols)
            raise GenomeError(f"symbol {bad!r} not in alphabet {''.join(self.symbols)!r}") from None

    def format(self, genome: Genome) -> str:
        return "".join(self.symbols[s] for s in genome)


BINARY = Alphabet(("0", "1"))


def genome(text: str, alphabet: Alphabet = BINARY) -> Genome:
    return alphabet.parse(text)


def population(items: Iterable[str | Genome], alphabet: Alphabet = BINARY) -> Population:
    """Build a population from strings or genome tuples, checking lengths agree."""
    members = frozenset(alphabet.parse(g) if isinstance(g, str) else tuple(g) for g in items)
    check_population(members, alphabet)
    return members


def check_population(pop: Iterable[Genome], alphabet: Alphabet | None = None) -> int:
    """Validate a population and return its genome length (0 when empty)."""
    lengths = {len(g) for g in pop}
    if len(lengths) > 1:
        raise GenomeError(f"genomes of different lengths in population: {sorted(lengths)}")
    if alphabet is not None:
        for g in pop:
            if any(not 0 <= s < alphabet.size for s in g):
                raise GenomeError(f"genome {g!r} has symbols outside the alphabet")
    return lengths.pop() if lengths else 0


def format_population(pop: Iterable[Genome], alphabet: Alphabet = BINARY) -> list[str]:
    return sorted(alphabet.format(g) for g in pop)


def read_population(path: str | Path, alphabet: Alphabet = BINARY) -> Population:
    """Read a population file: one genome per line, ``#`` starts a comment."""
    items = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            items.append(line)
    return population(items, alphabet)


def write_population(path: str | Path, pop: Iterable[Genome], alphabet: Alphabet = BINARY) -> None:
    Path(path).write_text("".join(s + "\n" for s in format_population(pop, alphabet)), encoding="utf-8")


# ---------------------------------------------------------------------------
# crossover on individuals


def crossover_apply(x: Genome, y: Genome, cuts: Sequence[int]) -> tuple[Genome, Genome]:
    """Cross ``x`` and ``y`` at the given cut points.

    ``cuts`` is a non-decreasing sequence ``k_1 <= ... <= k_n`` with values in
    ``[0, len(x)]``.  Segment ``(k_i, k_{i+1}]`` of the first child comes from
    ``x`` when ``i`` is even and from ``y`` otherwise; the second child is the
    mirror image.  Repeated cuts are allowed and simply produce empty segments.
    """
    length = len(x)
    if len(y) != length:
        raise GenomeError(f"parents have different lengths ({length} and {len(y)})")
    bounds = [0, *cuts, length]
    for k in cuts:
        if not 0 <= k <= length:
            raise GenomeError(f"cut {k} outside [0, {length}]")
    if any(a > b for a, b in zip(bounds, bounds[1:])):
        raise GenomeError(f"cuts must be non-decreasing, got {tuple(cuts)}")
    c1: list[int] = []
    c2: list[int] = []
    for i, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
        src1, src2 = (x, y) if i % 2 == 0 else (y, x)
        c1.extend(src1[lo:hi])
        c2.extend(src2[lo:hi])
    return tuple(c1), tuple(c2)


@dataclass(frozen=True, order=True)
class InheritanceMask:
    """Word over ``{a, b}`` saying which parent each position is copied from."""

    word: str

    @property
    def alternations(self) -> int:
        return sum(1 for u, v in zip(self.word, self.word[1:]) if u != v)

    def apply(self, x: Genome, y: Genome) -> Genome:
        return tuple(xi if w == "a" else yi for w, xi, yi in zip(self.word, x, y))

    @classmethod
    def from_cuts(cls, length: int, cuts: Sequence[int]) -> InheritanceMask:
        bounds = [0, *cuts, length]
        word = "".join(("a" if i % 2 == 0 else "b") * (hi - lo)
                       for i, (lo, hi) in enumerate(zip(bounds, bounds[1:])))
        return cls(word)


def mask_count(length: int, n: int) -> int:
    return 2 * sum(comb(length - 1, j) for j in range(n + 1))


@lru_cache(maxsize=None)
def _mask_words(length: int, n: int) -> tuple[str, ...]:
    # a word is fixed by its first letter and the set of switch positions
    words = []
    for j in range(min(n, length - 1) + 1):
        for switches in combinations(range(1, length), j):
            for first in "ab":
                cur, out, sw = first, [], set(switches)
                for i in range(length):
                    if i in sw:
                        cur = "b" if cur == "a" else "a"
                    out.append(cur)
                words.append("".join(out))
    return tuple(sorted(words))


def _check_points(length: int, n: int) -> None:
    if length < 1:
        raise GenomeError("genome length must be positive")
    if length > 1 and not 1 <= n <= length - 1:
        raise GenomeError(f"number of crossover points must lie in [1, {length - 1}], got {n}")


def enumerate_masks(length: int, n: int) -> frozenset[InheritanceMask]:
    """All inheritance masks of the given length with at most ``n`` alternations."""
    _check_points(length, n)
    return frozenset(InheritanceMask(w) for w in _mask_words(length, n))


def individuals_related(x: Genome, y: Genome, x2: Genome, y2: Genome, n: int) -> bool:
    """Whether one n-points crossover of ``(x, y)`` can yield the pair ``(x2, y2)``.

    Children are unordered: ``(y2, x2)`` counts as the same outcome.
    """
    length = len(x)
    if not len(y) == len(x2) == len(y2) == length:
        raise GenomeError("all four genomes must have the same length")
    if length == 1:
        return (x2, y2) in {(x, y), (y, x)}
    _check_points(length, n)
    for w in _mask_words(length, n):
        m = InheritanceMask(w)
        c1 = m.apply(x, y)
        c2 = m.apply(y, x)
        if (c1, c2) == (x2, y2) or (c1, c2) == (y2, x2):
            return True
    return False


# ---------------------------------------------------------------------------
# populations


@lru_cache(maxsize=None)
def _bool_masks(length: int, n: int) -> np.ndarray:
    # complements give the same children over ordered parent pairs, keep words starting with "a"
    words = [w for w in _mask_words(length, n) if w[0] == "a"]
    return np.array([[c == "a" for c in w] for w in words], dtype=bool).reshape(len(words), length)


class Codec:
    """Dense integer coding of ``Sigma^length`` (mixed radix, position 1 least significant)."""

    def __init__(self, length: int, q: int):
        self.length = length
        self.q = q
        self.weights = np.array([q**i for i in range(length)], dtype=np.int64)

    @property
    def universe(self) -> int:
        return self.q**self.length

    def encode(self, pop: Iterable[Genome]) -> np.ndarray:
        arr = np.array(sorted(pop), dtype=np.int64).reshape(-1, self.length)
        return arr @ self.weights

    def digits(self, codes: np.ndarray) -> np.ndarray:
        return (codes[:, None] // self.weights[None, :]) % self.q

    def decode(self, codes: Iterable[int]) -> Population:
        out = []
        for c in codes:
            c = int(c)
            g = []
            for _ in range(self.length):
                c, r = divmod(c, self.q)
                g.append(r)
            out.append(tuple(g))
        return frozenset(out)


def _children_codes(codec: Codec, left: np.ndarray, right: np.ndarray, n: int) -> np.ndarray:
    """Codes of every child ``mask(x, y)`` with ``x`` from ``left``, ``y`` from ``right``.

    Per mask the child set is the sum-set of the projections of ``left`` onto
    the a-positions and of ``right`` onto the b-positions, so each projection is
    deduplicated before combining.
    """
    if len(left) == 0 or len(right) == 0:
        return np.empty(0, dtype=np.int64)
    dl = codec.digits(left)
    dr = codec.digits(right)
    chunks = []
    for m in _bool_masks(codec.length, n):
        wa = np.where(m, codec.weights, 0)
        wb = codec.weights - wa
        pa = np.unique(dl @ wa)
        pb = np.unique(dr @ wb)
        chunks.append((pa[:, None] + pb[None, :]).ravel())
        if not m.all():
            # same mask with parent roles swapped
            pa2 = np.unique(dr @ wa)
            pb2 = np.unique(dl @ wb)
            chunks.append((pa2[:, None] + pb2[None, :]).ravel())
    return np.unique(np.concatenate(chunks))


def alphabet_size_for(pop: Iterable[Genome]) -> int:
    return max(2, 1 + max((max(g) for g in pop), default=1))


def offspring_pool(pop: Population, n: int, q: int | None = None) -> Population:
    """Every genome obtainable by one n-points crossover of two members of ``pop``.

    Parents need not be distinct, so the result always contains ``pop``.
    ``q`` is the alphabet size; it only affects the internal coding and defaults
    to the smallest size covering the symbols present.
    """
    if not pop:
        raise GenomeError("offspring pool of an empty population")
    length = check_population(pop)
    if length == 1:
        return frozenset(pop)
    _check_points(length, n)
    codec = Codec(length, q or alphabet_size_for(pop))
    codes = codec.encode(pop)
    return codec.decode(_children_codes(codec, codes, codes, n))


def populations_related(p1: Population, p2: Population, n: int) -> bool:
    """Whether every member of ``p2`` is a one-step crossover child of ``p1``."""
    if not p1:
        raise GenomeError("source population is empty")
    check_population(p1 | p2)
    return p2 <= offspring_pool(p1, n)
