from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xover.genome import offspring_pool
from xover.poset import (IntervalUnion, LowerSet, PosetError, _mu_pairs, _mu_raw, alternating_number,
                         canonicalize, enumerate_scn, mu_image, mu_iterates, mu_saturate, mu_step,
                         positions_mask, represent, run_count, scn_size)

from conftest import bits, instances, pop


def iu(text, length):
    return IntervalUnion.parse(text, length)


def brute_alt(a, b, length):
    """Minimum alternations over every word of the crossover language of (a, b)."""
    best = None
    for w in product("ab", repeat=length):
        ok = all(not (a >> i & 1 and not b >> i & 1 and w[i] != "a")
                 and not (b >> i & 1 and not a >> i & 1 and w[i] != "b") for i in range(length))
        if ok:
            alt = sum(1 for u, v in zip(w, w[1:]) if u != v)
            best = alt if best is None else min(best, alt)
    return best


def brute_scn_count(length, n):
    return sum(1 for m in range(1, 1 << length) if run_count(m) <= n)


def test_canonicalize():
    assert str(canonicalize({1, 2, 3}, 5)) == "[1,3]"
    assert str(canonicalize({1, 3, 5}, 5)) == "[1,1]+[3,3]+[5,5]"
    assert str(canonicalize({2, 3, 5, 6}, 8)) == "[2,3]+[5,6]"
    assert canonicalize({2, 3, 5, 6}, 8).components == ((2, 3), (5, 6))
    with pytest.raises(PosetError):
        canonicalize(set(), 5)
    with pytest.raises(PosetError):
        canonicalize({0, 1}, 5)
    with pytest.raises(PosetError):
        canonicalize({6}, 5)


def test_interval_union_roundtrip():
    u = iu("[2,3]+[5,6]", 8)
    assert u.mask == positions_mask({2, 3, 5, 6})
    assert IntervalUnion.from_mask(u.mask, 8) == u
    assert iu("[1,2]+[3,4]", 6) == iu("[1,4]", 6)
    assert u.positions == {2, 3, 5, 6}


def test_enumerate_scn_examples():
    assert len(enumerate_scn(8, 1)) == 36
    assert len(enumerate_scn(8, 4)) == 255
    assert len(enumerate_scn(1, 1)) == 1
    assert [str(u) for u in enumerate_scn(1, 1)] == ["[1,1]"]
    with pytest.raises(PosetError):
        enumerate_scn(4, 0)
    with pytest.raises(PosetError):
        enumerate_scn(4, 5)


@pytest.mark.parametrize("length", range(1, 13))
def test_scn_counts_closed_form(length):
    for n in range(1, min(length, 6) + 1):
        assert len(enumerate_scn(length, n)) == scn_size(length, n) == brute_scn_count(length, n)


def test_alternating_number_examples():
    assert alternating_number(iu("[1,2]", 6), iu("[4,5]", 6)) == 1 == brute_alt(0b000011, 0b011000, 6)
    a, b = iu("[1,1]+[5,5]", 5), iu("[3,3]", 5)
    assert alternating_number(a, b) == 2 == brute_alt(a.mask, b.mask, 5)
    assert alternating_number(a, a) == 0
    with pytest.raises(PosetError):
        alternating_number(iu("[1,1]", 5), iu("[1,1]", 6))


@given(st.integers(1, 10).flatmap(lambda L: st.tuples(st.just(L), st.integers(1, 2**L - 1), st.integers(1, 2**L - 1))))
def test_alternating_number_brute_force(args):
    length, a, b = args
    assert alternating_number(a, b) == alternating_number(b, a) == brute_alt(a, b, length)


def test_represent_example():
    r = represent(bits("111"), pop("110", "011"), 1)
    assert {str(u) for u in r.elements()} == {"[1,1]", "[2,2]", "[3,3]", "[1,2]", "[2,3]"}
    assert iu("[1,3]", 3) not in r
    assert len(represent(bits("101"), pop("101", "000"), 2)) == len(enumerate_scn(3, 2))
    assert len(represent(bits("11111111"), pop("00000000"), 3)) == 0


@given(instances(3, 7))
def test_represent_is_lower_set_and_top_iff_member(inst):
    length, n, x, p = inst
    r = represent(x, p, n)
    assert r.violations() == []
    assert r.has_top == (x in p)


def test_lower_set_rejects_non_downward_closed():
    poset = enumerate_scn(3, 1)
    with pytest.raises(PosetError):
        LowerSet(poset, [iu("[1,2]", 3).mask])
    LowerSet(poset, [iu(s, 3).mask for s in ("[1,2]", "[1,1]", "[2,2]")])


def test_mu_step_examples():
    poset = enumerate_scn(3, 1)
    u = LowerSet.generated_by(poset, [iu("[1,2]", 3), iu("[2,3]", 3)])
    assert iu("[1,3]", 3) not in u
    assert iu("[1,3]", 3) in mu_step(u, 1)
    assert alternating_number(iu("[1,2]", 3), iu("[2,3]", 3)) == 1

    empty = LowerSet(poset, [])
    assert mu_step(empty, 1) == empty
    full = LowerSet.generated_by(enumerate_scn(5, 2), [0b11111])
    assert mu_step(full, 2) == full


def test_mu_saturate_examples():
    s = mu_saturate(represent(bits("111"), pop("110", "011"), 1), 1)
    assert s.first_full == 1
    s = mu_saturate(represent(bits("0110"), pop("0110", "1111"), 2), 2)
    assert s.first_full == 0
    s = mu_saturate(represent(bits("0101"), pop("1010"), 1), 1)
    assert s.first_full is None
    assert len(s.fixed_point) == 0
    assert s.iterations == 0


@given(instances(3, 7))
def test_mu_is_extensive_isotone_and_closed(inst):
    length, n, x, p = inst
    u = represent(x, p, n)
    v = represent(x, p | {tuple(1 - c for c in x)}, n)
    mu_u, mu_v = mu_step(u, n), mu_step(v, n)
    assert u <= mu_u
    assert mu_u.violations() == []
    if u <= v:
        assert mu_u <= mu_v


@given(instances(3, 7))
def test_mu_paths_agree(inst):
    # interval shortcut, dense pair table and member-pair loop compute the same raw image
    length, n, x, p = inst
    for width in {1, n, (length + 1) // 2}:
        u = represent(x, p, n, width=width)
        raw = _mu_raw(u.poset, u.members, n)
        assert (raw == _mu_pairs(u.poset, u.members, n)).all()


def test_mu_iterates_reach_fixed_point():
    its = mu_iterates(represent(bits("11111111"), pop("11100111", "00011000"), 1), 1)
    assert its[-1] == mu_step(its[-1], 1)
    assert [u.has_top for u in its].index(True) == 2


@given(instances(3, 6).filter(lambda t: t[1] == 1))
def test_commuting_diagram_one_point(inst):
    length, n, x, p = inst
    assert represent(x, offspring_pool(p, n), n) == mu_step(represent(x, p, n), n)


@given(instances(3, 6))
def test_commuting_diagram_full_width(inst):
    length, n, x, p = inst
    w = (length + 1) // 2
    assert represent(x, offspring_pool(p, n), n, width=w) == mu_step(represent(x, p, n, width=w), n)


def test_commuting_diagram_fails_on_sc2():
    # y = 10101 agrees with x on {1,3,5}, v = 00010 on {4}; child mask aaaba gives 10111,
    # which agrees with x on {1}+[3,5].  No pair of SC_2 members unions to that set.
    x, p = bits("11111"), pop("10101", "00010")
    a = iu("[1,1]+[3,5]", 5)
    assert bits("10111") in offspring_pool(p, 2)
    assert a in represent(x, offspring_pool(p, 2), 2)
    assert a not in mu_step(represent(x, p, 2), 2)
    assert a in mu_step(represent(x, p, 2, width=3), 2)


def test_raw_mu_image_not_always_downward_closed():
    # 111010 agrees with x on {1,2,3,5}, 100100 on {1,4}: [1,5] is produced (forced
    # word aaba), but its subset {1}+[3,5] needs {1,3,5} from one parent (three
    # components) or the forced word baba (three switches)
    x, p = bits("111111"), pop("100100", "111010")
    u = represent(x, p, 2)
    raw = LowerSet(u.poset, mu_image(u, 2), check=False)
    sub = iu("[1,1]+[3,5]", 6)
    assert iu("[1,5]", 6) in raw
    assert sub not in raw
    assert sub.mask in raw.violations()
    closed = mu_step(u, 2)
    assert sub in closed and closed.violations() == []
    # the added element really is represented one generation later
    assert sub in represent(x, offspring_pool(p, 2), 2)


def test_non_lattice_witness():
    poset = enumerate_scn(5, 2)
    a, b = iu("[1,1]+[5,5]", 5), iu("[1,1]+[3,3]", 5)
    ups = [m for m in poset.masks if poset.leq(a, m) and poset.leq(b, m)]
    minimal = {m for m in ups if not any(o != m and poset.leq(o, m) for o in ups)}
    names = {str(IntervalUnion.from_mask(m, 5)) for m in minimal}
    assert {"[1,1]+[3,5]", "[1,3]+[5,5]"} <= names
    assert len(minimal) > 1


def test_dump_format():
    u = represent(bits("111"), pop("110", "011"), 1)
    lines = u.dump().splitlines()
    assert "[1,2]" in lines and "[2,3]" in lines
    assert all(IntervalUnion.parse(line, 3) in u for line in lines)


def test_pair_table_matches_definition():
    poset = enumerate_scn(5, 2)
    table = poset.pair_table(2)
    for i, a in enumerate(poset.masks):
        for j, b in enumerate(poset.masks):
            u = a | b
            want = poset.index[u] if u in poset.index and alternating_number(a, b) <= 2 else -1
            assert table[i, j] == want
    assert np.array_equal(poset.alt_matrix, poset.alt_matrix.T)
