from fractions import Fraction
from itertools import permutations
import random

import numpy as np
import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DWYER_A = [
    ["1", ".4", ".5", ".6"],
    [".4", "1", ".3", ".4"],
    [".5", ".3", "1", ".2"],
    [".6", ".4", ".2", "1"],
]
DWYER_B = [".2", ".4", ".6", ".8"]
EQ1_A = [[1, 2, 1], [1, 1, 2], [2, 1, 1]]
EQ1_B = [3, 9, 16]


def fr(rows):
    """Nested lists of ints/strings -> object array of Fractions."""
    return np.array([[Fraction(v) for v in r] for r in rows], dtype=object)


def fv(values):
    return np.array([Fraction(v) for v in values], dtype=object)


# -- independent oracles ---------------------------------------------------

def _sign(p):
    s, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def leibniz_det(m):
    n = len(m)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(_sign(p))
        for i in range(n):
            term *= m[i][p[i]]
            if not term:
                break
        total += term
    return total


def cramer(A, b):
    """Solution by Cramer's rule with Leibniz determinants (None if singular)."""
    A = [[Fraction(v) for v in r] for r in A]
    d = leibniz_det(A)
    if d == 0:
        return None
    n = len(A)
    out = []
    for c in range(n):
        m = [r[:c] + [Fraction(b[i])] + r[c + 1:] for i, r in enumerate(A)]
        out.append(leibniz_det(m) / d)
    return out


def matmul(a, b):
    return [[sum((Fraction(a[i][k]) * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def tolist(a):
    return [[Fraction(v.to_fraction() if hasattr(v, "to_fraction") else v) for v in r] for r in a]


def vlist(v):
    return [Fraction(x.to_fraction() if hasattr(x, "to_fraction") else x) for x in v]


# -- strategies --------------------------------------------------------------

small_fracs = st.fractions(min_value=-9, max_value=9, max_denominator=6)
small_ints = st.integers(-9, 9)


@st.composite
def square_matrices(draw, n_min=1, n_max=4, elements=small_fracs):
    n = draw(st.integers(n_min, n_max))
    return [[draw(elements) for _ in range(n)] for _ in range(n)]


@st.composite
def solvable_systems(draw, n_min=1, n_max=4, elements=small_fracs):
    A = draw(square_matrices(n_min, n_max, elements))
    if leibniz_det(A) == 0:
        # nudge the diagonal; still random enough for property tests
        A = [[v + (20 if i == j else 0) for j, v in enumerate(r)] for i, r in enumerate(A)]
    b = [draw(elements) for _ in range(len(A))]
    return A, b


@st.composite
def spd_matrices(draw, n_min=1, n_max=4):
    n = draw(st.integers(n_min, n_max))
    M = [[draw(small_ints) for _ in range(n)] for _ in range(n)]
    MtM = matmul([list(c) for c in zip(*M)], M)
    return [[v + (1 if i == j else 0) for j, v in enumerate(r)] for i, r in enumerate(MtM)]


def random_system(rng: random.Random, n: int, integer=False):
    while True:
        if integer:
            A = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
            b = [Fraction(rng.randint(-20, 20)) for _ in range(n)]
        else:
            A = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)]
            b = [Fraction(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(n)]
        if _full_rank(A):
            return A, b


def _full_rank(A):
    m = [r[:] for r in A]
    n = len(m)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return False
        m[c], m[p] = m[p], m[c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return True


def random_spd(rng: random.Random, n: int):
    M = [[Fraction(rng.randint(-5, 5)) for _ in range(n)] for _ in range(n)]
    S = matmul([list(c) for c in zip(*M)], M)
    for i in range(n):
        S[i][i] += 1
    return S


@pytest.fixture
def rng():
    return random.Random(20240601)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
