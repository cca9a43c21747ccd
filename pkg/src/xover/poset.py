"""Unions of intervals over ``[1, length]``, lower sets of them, and the mu operator.

Every interval union is handled internally as an integer bit mask where bit
``i - 1`` stands for position ``i``.  :class:`IntervalUnion` is the readable
wrapper used at the API boundary and in debug dumps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .genome import Genome, GenomeError, Population, check_population

# posets larger than this use the member-pair loop instead of a dense pair table
TABLE_LIMIT = 2600


class PosetError(ValueError):
    pass


def run_count(mask: int) -> int:
    """Number of maximal runs of set bits."""
    return bin(mask & ~(mask << 1)).count("1")


def runs_of(mask: int) -> list[tuple[int, int]]:
    """Maximal runs of ``mask`` as 1-based closed intervals, left to right."""
    out = []
    pos = 0
    while mask:
        if mask & 1:
            start = pos
            while mask & 1:
                mask >>= 1
                pos += 1
            out.append((start + 1, pos))
        else:
            low = (mask & -mask).bit_length() - 1
            mask >>= low
            pos += low
    return out


def positions_mask(positions: Iterable[int]) -> int:
    m = 0
    for p in positions:
        m |= 1 << (p - 1)
    return m


@dataclass(frozen=True, order=True)
class IntervalUnion:
    """Canonical union of disjoint, non-adjacent closed intervals."""

    components: tuple[tuple[int, int], ...]
    length: int = field(compare=False)

    @classmethod
    def from_mask(cls, mask: int, length: int) -> IntervalUnion:
        return cls(tuple(runs_of(mask)), length)

    @classmethod
    def parse(cls, text: str, length: int) -> IntervalUnion:
        """Inverse of ``str``: ``"[1,2]+[5,5]"``."""
        comps = []
        for part in text.strip().split("+"):
            i, j = part.strip().strip("[]").split(",")
            comps.append((int(i), int(j)))
        return canonicalize({p for i, j in comps for p in range(i, j + 1)}, length)

    @property
    def mask(self) -> int:
        m = 0
        for i, j in self.components:
            m |= ((1 << (j - i + 1)) - 1) << (i - 1)
        return m

    @property
    def positions(self) -> frozenset[int]:
        return frozenset(p for i, j in self.components for p in range(i, j + 1))

    def __len__(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        return "+".join(f"[{i},{j}]" for i, j in self.components)


def canonicalize(positions: Iterable[int], length: int) -> IntervalUnion:
    """Decompose a set of positions into its maximal runs."""
    pos = set(positions)
    if not pos:
        raise PosetError("cannot canonicalize an empty set of positions")
    bad = [p for p in pos if not 1 <= p <= length]
    if bad:
        raise PosetError(f"positions {sorted(bad)} outside [1, {length}]")
    return IntervalUnion.from_mask(positions_mask(pos), length)


def alternating_number(a: int | IntervalUnion, b: int | IntervalUnion, length: int | None = None) -> int:
    """Fewest a/b switches of any word that takes ``a`` on A minus B and ``b`` on B minus A.

    Positions in both sets or in neither are free, so only the forced symbols
    matter: the answer is the number of changes in the forced subsequence.
    """
    if isinstance(a, IntervalUnion) or isinstance(b, IntervalUnion):
        la = a.length if isinstance(a, IntervalUnion) else length
        lb = b.length if isinstance(b, IntervalUnion) else length
        if la != lb:
            raise PosetError(f"interval unions over different lengths ({la} and {lb})")
        a = a.mask if isinstance(a, IntervalUnion) else a
        b = b.mask if isinstance(b, IntervalUnion) else b
    return _alt(a, b)


@lru_cache(maxsize=1 << 20)
def _alt(a: int, b: int) -> int:
    fa = a & ~b
    fb = b & ~a
    forced = fa | fb
    count = 0
    last = -1
    while forced:
        low = forced & -forced
        sym = 1 if fa & low else 0
        if last >= 0 and sym != last:
            count += 1
        last = sym
        forced ^= low
    return count


def _alt_matrix(elems: np.ndarray, length: int) -> np.ndarray:
    """Pairwise alternating numbers, computed with one vectorised left-to-right scan."""
    a = elems[:, None]
    b = elems[None, :]
    fa = a & ~b
    fb = b & ~a
    n = len(elems)
    last = np.full((n, n), -1, dtype=np.int8)
    count = np.zeros((n, n), dtype=np.int16)
    one = np.uint64(1)
    for p in range(length):
        bit = np.uint64(p)
        ia = ((fa >> bit) & one).astype(bool)
        ib = ((fb >> bit) & one).astype(bool)
        sym = np.where(ia, 1, np.where(ib, 0, -1)).astype(np.int8)
        forced = sym >= 0
        count += (forced & (last >= 0) & (sym != last)).astype(np.int16)
        last = np.where(forced, sym, last)
    return count


def scn_size(length: int, n: int) -> int:
    """Closed-form count of non-empty subsets of ``[1, length]`` with at most ``n`` runs."""
    from math import comb

    return sum(comb(length + 1, 2 * j) for j in range(1, n + 1))


class SCnPoset:
    """All unions of at most ``width`` intervals in ``[1, length]``, ordered by inclusion."""

    def __init__(self, length: int, width: int):
        if length < 1:
            raise PosetError("length must be positive")
        if not 1 <= width <= length:
            raise PosetError(f"component bound must lie in [1, {length}], got {width}")
        if length > 64:
            raise PosetError("lengths above 64 are not supported")
        self.length = length
        self.width = width
        masks = sorted(_enumerate_masks(length, width), key=lambda m: (bin(m).count("1"), m))
        self.masks: tuple[int, ...] = tuple(masks)
        self.index: dict[int, int] = {m: i for i, m in enumerate(masks)}
        self.full = (1 << length) - 1
        self.top = self.index[self.full]

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[IntervalUnion]:
        return (IntervalUnion.from_mask(m, self.length) for m in self.masks)

    def __contains__(self, item: int | IntervalUnion) -> bool:
        m = item.mask if isinstance(item, IntervalUnion) else item
        return m in self.index

    def __repr__(self) -> str:
        return f"SCnPoset(length={self.length}, width={self.width}, size={len(self)})"

    def leq(self, a: int | IntervalUnion, b: int | IntervalUnion) -> bool:
        a = a.mask if isinstance(a, IntervalUnion) else a
        b = b.mask if isinstance(b, IntervalUnion) else b
        return a & ~b == 0

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.masks, dtype=np.uint64)

    @cached_property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Left and right endpoints, only meaningful when ``width == 1``."""
        lo = np.array([(m & -m).bit_length() for m in self.masks], dtype=np.int64)
        hi = np.array([m.bit_length() for m in self.masks], dtype=np.int64)
        return lo, hi

    @cached_property
    def subset_matrix(self) -> np.ndarray:
        a = self.array
        return (a[:, None] & ~a[None, :]) == 0

    @cached_property
    def alt_matrix(self) -> np.ndarray:
        return _alt_matrix(self.array, self.length)

    @lru_cache(maxsize=None)
    def pair_table(self, n: int) -> np.ndarray:
        """``T[i, j]`` is the index of ``e_i | e_j`` when that union is in the poset
        and the pair alternates at most ``n`` times, else -1."""
        a = self.array
        union = a[:, None] | a[None, :]
        pos = np.searchsorted(self.sorted_array, union)
        pos = np.minimum(pos, len(a) - 1)
        inside = self.sorted_array[pos] == union
        idx = self.sorted_order[pos]
        table = np.where(inside & (self.alt_matrix <= n), idx, -1)
        return table.astype(np.int32)

    @cached_property
    def sorted_order(self) -> np.ndarray:
        return np.argsort(self.array, kind="stable")

    @cached_property
    def sorted_array(self) -> np.ndarray:
        return self.array[self.sorted_order]

    def dump(self, members: Iterable[int] | None = None) -> str:
        masks = self.masks if members is None else [self.masks[i] for i in members]
        return "".join(str(IntervalUnion.from_mask(m, self.length)) + "\n" for m in masks)


def _enumerate_masks(length: int, width: int) -> list[int]:
    # choose 2j boundaries among 0..length: runs are [b0+1, b1], [b2+1, b3], ...
    out = []
    for j in range(1, min(width, (length + 1) // 2) + 1):
        for cut in combinations(range(length + 1), 2 * j):
            m = 0
            for s, e in zip(cut[::2], cut[1::2]):
                m |= ((1 << (e - s)) - 1) << s
            out.append(m)
    return out


@lru_cache(maxsize=64)
def enumerate_scn(length: int, n: int) -> SCnPoset:
    """The poset SC_n over ``[1, length]`` (cached; posets are immutable)."""
    return SCnPoset(length, n)


class LowerSet:
    """Downward-closed subset of an :class:`SCnPoset`, stored as a membership table."""

    __slots__ = ("poset", "members")

    def __init__(self, poset: SCnPoset, members: np.ndarray | Iterable[int], check: bool = True):
        self.poset = poset
        if isinstance(members, np.ndarray) and members.dtype == bool:
            arr = members.copy()
        else:
            arr = np.zeros(len(poset), dtype=bool)
            idx = [poset.index[m] if m in poset.index else _missing(m) for m in members]
            arr[idx] = True
        arr.setflags(write=False)
        self.members = arr
        if check:
            bad = self.violations()
            if bad:
                raise PosetError(f"not downward closed: {len(bad)} missing elements, e.g. "
                                 f"{IntervalUnion.from_mask(bad[0], poset.length)}")

    @classmethod
    def generated_by(cls, poset: SCnPoset, generators: Iterable[int | IntervalUnion]) -> LowerSet:
        """Smallest lower set containing the given elements."""
        gens = np.array([g.mask if isinstance(g, IntervalUnion) else g for g in generators], dtype=np.uint64)
        if len(gens) == 0:
            return cls(poset, np.zeros(len(poset), dtype=bool), check=False)
        arr = ((poset.array[:, None] & ~gens[None, :]) == 0).any(axis=1)
        return cls(poset, arr, check=False)

    def violations(self) -> list[int]:
        """Elements below some member that are not members themselves."""
        p = self.poset
        if not self.members.any():
            return []
        if len(p) <= TABLE_LIMIT:
            below = p.subset_matrix[:, self.members].any(axis=1)
            return [p.masks[i] for i in np.flatnonzero(below & ~self.members)]
        gens = p.array[self.members]
        out = []
        for i in np.flatnonzero(~self.members):
            if ((p.array[i] & ~gens) == 0).any():
                out.append(p.masks[i])
        return out

    def masks(self) -> list[int]:
        return [self.poset.masks[i] for i in np.flatnonzero(self.members)]

    def elements(self) -> set[IntervalUnion]:
        return {IntervalUnion.from_mask(m, self.poset.length) for m in self.masks()}

    def __contains__(self, item: int | IntervalUnion) -> bool:
        m = item.mask if isinstance(item, IntervalUnion) else item
        i = self.poset.index.get(m)
        return i is not None and bool(self.members[i])

    def __len__(self) -> int:
        return int(self.members.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LowerSet):
            return NotImplemented
        return self.poset is other.poset and bool((self.members == other.members).all())

    def __le__(self, other: LowerSet) -> bool:
        return bool((~self.members | other.members).all())

    def __hash__(self) -> int:
        return hash((self.poset.length, self.poset.width, self.members.tobytes()))

    def __repr__(self) -> str:
        return f"LowerSet({len(self)}/{len(self.poset)} of SC_{self.poset.width}, length={self.poset.length})"

    @property
    def has_top(self) -> bool:
        return bool(self.members[self.poset.top])

    def dump(self) -> str:
        return self.poset.dump(np.flatnonzero(self.members))


def _missing(m: int):
    raise PosetError(f"mask {m:#b} is not an element of the poset")


# ---------------------------------------------------------------------------
# representation and mu


def agreement_mask(x: Genome, y: Genome) -> int:
    """Positions (as a bit mask) where ``y`` carries the same symbol as ``x``."""
    m = 0
    for i, (a, b) in enumerate(zip(x, y)):
        if a == b:
            m |= 1 << i
    return m


def represent(x: Genome, pop: Population, n: int, width: int | None = None) -> LowerSet:
    """Lower set of interval unions on which some member of ``pop`` agrees with ``x``.

    ``width`` bounds the number of components of the representing poset and
    defaults to ``n``.
    """
    length = len(x)
    if not pop:
        raise GenomeError("cannot represent against an empty population")
    if check_population(pop) != length:
        raise GenomeError("target genome and population have different lengths")
    poset = enumerate_scn(length, width or n)
    return LowerSet.generated_by(poset, {agreement_mask(x, y) for y in pop})


def _check_points(poset: SCnPoset, n: int) -> None:
    if poset.length > 1 and not 1 <= n <= poset.length - 1:
        raise PosetError(f"number of crossover points must lie in [1, {poset.length - 1}], got {n}")


def mu_step(lower: LowerSet, n: int) -> LowerSet:
    """One application of mu: add every union ``B1 | B2`` of members that stays in
    the poset and alternates at most ``n`` times, then close downward.

    The raw image can miss a few elements below new unions when the poset
    bounds the number of components (a sub-union may only split into pieces
    with too many components).  Those elements are represented in the next
    generation anyway, so adding them is sound.
    """
    poset = lower.poset
    _check_points(poset, n)
    return LowerSet(poset, _mu_members(poset, lower.members, n), check=False)


def mu_image(lower: LowerSet, n: int) -> np.ndarray:
    """Membership vector of the raw image, without the downward closure."""
    _check_points(lower.poset, n)
    return _mu_raw(lower.poset, lower.members, n)


def _mu_members(poset: SCnPoset, members: np.ndarray, n: int) -> np.ndarray:
    out = _mu_raw(poset, members, n)
    if poset.width == 1 or poset.width >= (poset.length + 1) // 2 or (out == members).all():
        # intervals and the full power set are always closed already
        return out
    return _down_close(poset, out)


def _down_close(poset: SCnPoset, members: np.ndarray) -> np.ndarray:
    if len(poset) <= TABLE_LIMIT:
        return poset.subset_matrix[:, members].any(axis=1)
    gens = poset.array[members]
    return np.array([((m & ~gens) == 0).any() for m in poset.array], dtype=bool)


def _mu_raw(poset: SCnPoset, members: np.ndarray, n: int) -> np.ndarray:
    if not members.any():
        return members
    if poset.width == 1:
        return _mu_intervals(poset, members)
    if len(poset) <= TABLE_LIMIT:
        idx = np.flatnonzero(members)
        produced = poset.pair_table(n)[np.ix_(idx, idx)]
        out = members.copy()
        out[produced[produced >= 0]] = True
        return out
    return _mu_pairs(poset, members, n)


def _mu_intervals(poset: SCnPoset, members: np.ndarray) -> np.ndarray:
    # a lower set of intervals is fixed by reach[i] = furthest j with [i, j] a member;
    # [i, j] is produced iff [i, k] and [k + 1, j] are members for some k
    length = poset.length
    lo, hi = poset.bounds
    reach = np.arange(length + 2) - 1  # reach[i] = i - 1 means "nothing starts at i"
    np.maximum.at(reach, lo[members], hi[members])
    new = reach.copy()
    for i in range(1, length + 1):
        r = reach[i]
        if r >= i:
            best = r
            for k in range(i, r + 1):
                if k + 1 <= length and reach[k + 1] > best:
                    best = reach[k + 1]
            new[i] = best
    return hi <= new[lo]


def _mu_pairs(poset: SCnPoset, members: np.ndarray, n: int) -> np.ndarray:
    masks = [poset.masks[i] for i in np.flatnonzero(members)]
    out = members.copy()
    index = poset.index
    width = poset.width
    for i, b1 in enumerate(masks):
        for b2 in masks[i + 1:]:
            u = b1 | b2
            if u == b1 or u == b2:
                continue
            j = index.get(u)
            if j is None or out[j] or run_count(u) > width:
                continue
            if _alt(b1, b2) <= n:
                out[j] = True
    return out


@dataclass(frozen=True)
class Saturation:
    first_full: int | None
    fixed_point: LowerSet
    iterations: int


def mu_saturate(lower: LowerSet, n: int, stop_at_full: bool = False) -> Saturation:
    """Iterate mu to its fixed point.

    ``first_full`` is the first iterate containing ``[1, length]`` (``None`` if
    it never appears) and ``iterations`` the number of steps that changed the
    set.  With ``stop_at_full`` the loop ends as soon as the top appears and
    ``fixed_point`` is then just the last iterate computed.
    """
    poset = lower.poset
    _check_points(poset, n)
    cur = lower.members
    first_full = 0 if cur[poset.top] else None
    steps = 0
    while not (stop_at_full and first_full is not None):
        nxt = _mu_members(poset, cur, n)
        if (nxt == cur).all():
            break
        steps += 1
        cur = nxt
        if first_full is None and cur[poset.top]:
            first_full = steps
    return Saturation(first_full, LowerSet(poset, cur, check=False), steps)


def mu_iterates(lower: LowerSet, n: int) -> Sequence[LowerSet]:
    """``[U, mu(U), mu(mu(U)), ...]`` up to and including the fixed point."""
    out = [lower]
    while True:
        nxt = mu_step(out[-1], n)
        if nxt == out[-1]:
            return out
        out.append(nxt)
