"""Shared strategies and brute-force oracles.

The oracles here deliberately avoid the package's own algorithms: they
enumerate chains by plain recursion, compute Möbius values by inverting the
zeta matrix with sympy, and decide interlacing from explicitly known roots.
"""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from chowposet import families as fam
from chowposet.poly import IntPoly
from chowposet.poset import build_poset


# ---------------------------------------------------------------- strategies

@st.composite
def graded_posets(draw, max_rank=4, max_width=4):
    """Bounded graded posets drawn level by level; every element is on a maximal chain."""
    rank = draw(st.integers(1, max_rank))
    widths = [1] + [draw(st.integers(1, max_width)) for _ in range(rank - 1)] + [1]
    levels, start = [], 0
    for w in widths:
        levels.append(list(range(start, start + w)))
        start += w
    covers = set()
    for lo, hi in zip(levels, levels[1:]):
        for s in lo:
            covers.add((s, draw(st.sampled_from(hi))))
        for t in hi:
            covers.add((draw(st.sampled_from(lo)), t))
        extra = draw(st.sets(st.tuples(st.sampled_from(lo), st.sampled_from(hi)), max_size=len(lo) * len(hi)))
        covers |= extra
    return build_poset(sorted(covers), start)


@st.composite
def labeled_posets(draw, max_rank=4, max_width=3, max_label=3):
    P = draw(graded_posets(max_rank=max_rank, max_width=max_width))
    from chowposet.labeling import attach_labeling

    labels = [(s, t, draw(st.integers(1, max_label))) for s, t in P.covers]
    return P, attach_labeling(P, labels)


@st.composite
def rational_rooted(draw, max_degree=5):
    """(polynomial with integer coefficients, list of its roots) with small rational roots."""
    deg = draw(st.integers(0, max_degree))
    roots = []
    f = IntPoly((draw(st.integers(1, 3)),))
    for _ in range(deg):
        num = draw(st.integers(-8, 8))
        den = draw(st.integers(1, 3))
        roots.append(Fraction(num, den))
        f = f * IntPoly((-num, den))
    return f, sorted(roots)


# ---------------------------------------------------------------- oracles

def oracle_max_chains(P, lo=None, hi=None):
    lo = P.bottom if lo is None else lo
    hi = P.top if hi is None else hi
    out = []

    def walk(path):
        e = path[-1]
        if e == hi:
            out.append(tuple(path))
            return
        for t in P.up[e]:
            if oracle_le(P, t, hi):
                walk(path + [t])

    walk([lo])
    return out


def oracle_le(P, s, t):
    if s == t:
        return True
    return any(oracle_le(P, u, t) for u in P.up[s])


def oracle_zeta_mobius(P):
    """Möbius matrix as the inverse of the zeta matrix (sympy, exact)."""
    n = P.count
    Z = sympy.zeros(n, n)
    for a in range(n):
        for b in range(n):
            if oracle_le(P, a, b):
                Z[a, b] = 1
    return Z.inv()


def oracle_alpha(P, S):
    """Chains of the poset visiting exactly the ranks in S, by enumeration."""
    S = sorted(S)
    total = 0

    def walk(e, idx):
        nonlocal total
        if idx == len(S):
            total += 1
            return
        for u in range(P.count):
            if P.rank[u] == S[idx] and oracle_le(P, e, u):
                walk(u, idx + 1)

    walk(P.bottom, 0)
    return total


def oracle_el(P, labels):
    """EL by brute force: every interval has exactly one weakly increasing maximal
    chain, and it is lexicographically first."""
    for s in range(P.count):
        for t in range(P.count):
            if s == t or not oracle_le(P, s, t):
                continue
            words = []
            for c in oracle_max_chains(P, s, t):
                words.append(tuple(labels[(a, b)] for a, b in zip(c, c[1:])))
            inc = [w for w in words if all(x <= y for x, y in zip(w, w[1:]))]
            if len(inc) != 1 or inc[0] != min(words):
                return False
    return True


def eulerian(n):
    """Eulerian polynomial coefficients by counting permutation descents."""
    from itertools import permutations

    out = [0] * max(n, 1)
    for p in permutations(range(n)):
        out[sum(p[i] > p[i + 1] for i in range(n - 1))] += 1
    return out


def interlace_from_roots(fr, gr):
    """f <= g from explicit root lists (weak alternation, g holding the largest)."""
    a = sorted(fr, reverse=True)
    b = sorted(gr, reverse=True)
    if len(b) not in (len(a), len(a) + 1):
        return False
    for i in range(len(a)):
        if not a[i] <= b[i]:
            return False
        if i + 1 < len(b) and not b[i + 1] <= a[i]:
            return False
    return True


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="session")
def type_b():
    return {n: fam.dowling(n, 2) for n in (2, 3, 4)}


@pytest.fixture
def rng():
    return random.Random(12345)


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per criterion; lines are echoed and repeated in the summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}" + (f": {detail}" if detail else "")
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
