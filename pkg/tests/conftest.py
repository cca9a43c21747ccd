from itertools import combinations_with_replacement, product

import hypothesis.strategies as st
from hypothesis import settings

from xover.genome import crossover_apply

settings.register_profile("default", max_examples=100, deadline=None)
settings.register_profile("ci", max_examples=300, deadline=None)
settings.load_profile("default")


def bits(text):
    return tuple(int(c) for c in text)


def pop(*texts):
    return frozenset(bits(t) for t in texts)


@st.composite
def genomes(draw, length):
    return tuple(draw(st.lists(st.integers(0, 1), min_size=length, max_size=length)))


@st.composite
def populations(draw, length, min_size=1, max_size=5):
    return frozenset(draw(st.lists(genomes(length), min_size=min_size, max_size=max_size)))


@st.composite
def instances(draw, min_length=3, max_length=6):
    """(length, n, x, P) with 1 <= n <= length - 1."""
    length = draw(st.integers(min_length, max_length))
    n = draw(st.integers(1, length - 1))
    return length, n, draw(genomes(length)), draw(populations(length))


# ---------------------------------------------------------------------------
# brute-force references that only use cut vectors, never masks or posets


def children_by_cuts(x, y, n):
    length = len(x)
    out = set()
    for cuts in combinations_with_replacement(range(length + 1), n):
        c1, c2 = crossover_apply(x, y, cuts)
        out.add(c1)
        out.add(c2)
    return out


def naive_pool(p, n):
    out = set()
    for x, y in product(p, repeat=2):
        out |= children_by_cuts(x, y, n)
    return frozenset(out)


def naive_min_generations(p1, p2, n):
    """min{i : p2 within S_i(p1)} by plain iteration, None if never."""
    s, i = frozenset(p1), 0
    while True:
        if p2 <= s:
            return i
        nxt = naive_pool(s, n)
        if nxt == s:
            return None
        s, i = nxt, i + 1


# ---------------------------------------------------------------------------
# acceptance report: one PASS/FAIL line per criterion, echoed after the run

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
