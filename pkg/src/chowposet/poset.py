"""Graded bounded posets given by their cover relations.

Elements are dense integer indices.  Ranks are always recomputed from the
cover graph (longest path from the bottom) and then checked against every
cover, so an input can never smuggle in an inconsistent grading.

Two lazily built auxiliary structures carry most of the work:

* level-to-level reachability matrices (scipy sparse, 0/1) for chain
  counting and Whitney numbers, which scale to ~10^5 elements;
* up/down-set bitsets (Python ints over positions sorted by rank) for
  interval membership and lattice operations on desk-size posets.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import (
    InvalidPoset,
    NotBounded,
    NotComparable,
    NotGraded,
    RankZeroInterval,
    SizeLimitExceeded,
)
from .poly import IntPoly

DEFAULT_MAX_CHAINS = 10**7


class GradedPoset:
    """Immutable bounded graded poset.  Build with :func:`build_poset`."""

    def __init__(self, count, covers, rank, bottom, top, names=None):
        self.count = count
        self.covers = covers  # sorted tuple of (lower, upper)
        self.rank = rank  # tuple
        self.bottom = bottom
        self.top = top
        self.names = names
        up = [[] for _ in range(count)]
        down = [[] for _ in range(count)]
        for s, t in covers:
            up[s].append(t)
            down[t].append(s)
        self.up = tuple(tuple(sorted(u)) for u in up)
        self.down = tuple(tuple(sorted(d)) for d in down)
        n = rank[top]
        levels = [[] for _ in range(n + 1)]
        for e in range(count):
            levels[rank[e]].append(e)
        self.levels = tuple(tuple(lv) for lv in levels)
        self._memo = {}

    # basic facts
    @property
    def element_count(self) -> int:
        return self.count

    @property
    def n(self) -> int:
        """Rank of the poset (rank of the top element)."""
        return self.rank[self.top]

    def rank_profile(self) -> tuple:
        return tuple(len(lv) for lv in self.levels)

    def name(self, e: int) -> str:
        return self.names[e] if self.names else str(e)

    def atoms(self) -> tuple:
        return self.up[self.bottom]

    def __repr__(self):
        return f"GradedPoset(count={self.count}, rank={self.n}, profile={self.rank_profile()})"

    def same_structure(self, other: "GradedPoset") -> bool:
        return self.count == other.count and self.covers == other.covers

    # positions sorted by rank, used by the bitsets
    @cached_property
    def order(self) -> tuple:
        return tuple(e for lv in self.levels for e in lv)

    @cached_property
    def pos(self) -> tuple:
        p = [0] * self.count
        for i, e in enumerate(self.order):
            p[e] = i
        return tuple(p)

    @cached_property
    def local_index(self) -> tuple:
        loc = [0] * self.count
        for lv in self.levels:
            for i, e in enumerate(lv):
                loc[e] = i
        return tuple(loc)

    @cached_property
    def up_bits(self) -> tuple:
        pos, bits = self.pos, [0] * self.count
        for e in reversed(self.order):
            b = 1 << pos[e]
            for t in self.up[e]:
                b |= bits[t]
            bits[e] = b
        return tuple(bits)

    @cached_property
    def down_bits(self) -> tuple:
        pos, bits = self.pos, [0] * self.count
        for e in self.order:
            b = 1 << pos[e]
            for s in self.down[e]:
                b |= bits[s]
            bits[e] = b
        return tuple(bits)

    def elements_of(self, bits: int) -> list:
        """Elements in a position bitset, in increasing position (so rank) order."""
        order = self.order
        out = []
        while bits:
            low = bits & -bits
            out.append(order[low.bit_length() - 1])
            bits ^= low
        return out

    def le(self, s: int, t: int) -> bool:
        if s == t:
            return True
        rs, rt = self.rank[s], self.rank[t]
        if rs >= rt:
            return False
        return bool(self.reach(rs, rt)[self.local_index[s], self.local_index[t]])

    def up_set(self, s: int) -> list:
        return self.elements_of(self.up_bits[s])

    def down_set(self, t: int) -> list:
        return self.elements_of(self.down_bits[t])

    # level-to-level comparability
    def cover_matrix(self, r: int):
        key = ("cover", r)
        m = self._memo.get(key)
        if m is None:
            loc = self.local_index
            lo, hi = self.levels[r], self.levels[r + 1]
            rows, cols = [], []
            for s in lo:
                for t in self.up[s]:
                    rows.append(loc[s])
                    cols.append(loc[t])
            m = sparse.csr_matrix(
                (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(len(lo), len(hi))
            )
            self._memo[key] = m
        return m

    def reach(self, a: int, b: int):
        """0/1 sparse matrix: rows rank-a elements, columns rank-b elements, entry s <= t."""
        key = ("reach", a, b)
        m = self._memo.get(key)
        if m is not None:
            return m
        if b < a:
            raise ValueError("reach needs a <= b")
        if a == b:
            m = sparse.identity(len(self.levels[a]), dtype=np.int64, format="csr")
        elif b == a + 1:
            m = self.cover_matrix(a)
        else:
            m = self.reach(a, b - 1) @ self.cover_matrix(b - 1)
            m.data[:] = 1
            m.eliminate_zeros()
        self._memo[key] = m
        return m

    @cached_property
    def maximal_chain_count(self) -> int:
        cnt = [0] * self.count
        cnt[self.bottom] = 1
        for e in self.order:
            c = cnt[e]
            if c:
                for t in self.up[e]:
                    cnt[t] += c
        return cnt[self.top]


def build_poset(covers: Iterable[Sequence[int]], count: int, names: Sequence[str] | None = None) -> GradedPoset:
    """Validate a cover relation and return the graded poset it generates."""
    pairs = set()
    for pair in covers:
        s, t = (int(v) for v in pair)
        if not (0 <= s < count and 0 <= t < count):
            raise InvalidPoset(f"cover ({s}, {t}) refers to an element outside 0..{count - 1}")
        if s == t:
            raise InvalidPoset(f"self-cover at {s}", witness=(s, t))
        pairs.add((s, t))
    if count < 1:
        raise NotBounded("empty poset")
    indeg = [0] * count
    up = [[] for _ in range(count)]
    for s, t in pairs:
        indeg[t] += 1
        up[s].append(t)
    minimal = [e for e in range(count) if indeg[e] == 0]
    maximal = [e for e in range(count) if not up[e]]
    if len(minimal) != 1 or len(maximal) != 1:
        raise NotBounded(
            f"{len(minimal)} minimal and {len(maximal)} maximal elements",
            witness={"minimal": minimal, "maximal": maximal},
        )
    # longest path ranks via Kahn's order
    rank = [0] * count
    deg = list(indeg)
    queue = deque(minimal)
    seen = 0
    while queue:
        s = queue.popleft()
        seen += 1
        for t in up[s]:
            rank[t] = max(rank[t], rank[s] + 1)
            deg[t] -= 1
            if deg[t] == 0:
                queue.append(t)
    if seen != count:
        raise InvalidPoset("cover relation contains a cycle")
    for s, t in pairs:
        if rank[t] != rank[s] + 1:
            raise NotGraded(
                f"cover ({s}, {t}) spans ranks {rank[s]} -> {rank[t]}", witness=(s, t)
            )
    if names is not None:
        names = tuple(str(x) for x in names)
        if len(names) != count:
            raise InvalidPoset("names must match element count")
    return GradedPoset(count, tuple(sorted(pairs)), tuple(rank), minimal[0], maximal[0], names)


def single_point() -> GradedPoset:
    return build_poset([], 1)


def chain_poset(n: int) -> GradedPoset:
    """The chain 0 < 1 < ... < n."""
    return build_poset([(i, i + 1) for i in range(n)], n + 1)


def dual(P: GradedPoset) -> GradedPoset:
    return build_poset([(t, s) for s, t in P.covers], P.count, P.names)


def add_bottom(P: GradedPoset) -> GradedPoset:
    """Adjoin a new minimum (index P.count) below the old bottom."""
    names = None
    if P.names:
        names = P.names + ("new_bottom",)
    return build_poset(list(P.covers) + [(P.count, P.bottom)], P.count + 1, names)


def induced(P: GradedPoset, members: Iterable[int]) -> tuple[GradedPoset, tuple]:
    """Sub-poset on members whose covers are the covers of P among them.

    Only meaningful for convex subsets such as intervals.  Returns the new
    poset and the tuple mapping new indices to old elements.
    """
    old = tuple(sorted(members, key=lambda e: (P.rank[e], e)))
    new = {e: i for i, e in enumerate(old)}
    covers = [(new[s], new[t]) for s in old for t in P.up[s] if t in new]
    names = tuple(P.name(e) for e in old)
    return build_poset(covers, len(old), names), old


@dataclass(frozen=True)
class Interval:
    parent: GradedPoset
    lo: int
    hi: int
    members: frozenset

    @property
    def rank(self) -> int:
        return self.parent.rank[self.hi] - self.parent.rank[self.lo]

    def as_poset(self) -> GradedPoset:
        return self.poset_and_map()[0]

    def poset_and_map(self):
        key = ("interval_poset", self.lo, self.hi)
        got = self.parent._memo.get(key)
        if got is None:
            got = induced(self.parent, self.members)
            self.parent._memo[key] = got
        return got


def interval(P: GradedPoset, s: int, t: int) -> Interval:
    if not P.le(s, t):
        raise NotComparable(f"{P.name(s)} is not below {P.name(t)}", witness=(s, t))
    bits = P.up_bits[s] & P.down_bits[t]
    return Interval(P, s, t, frozenset(P.elements_of(bits)))


def upper_interval(P: GradedPoset, s: int) -> GradedPoset:
    return interval(P, s, P.top).as_poset()


def mobius_row(P: GradedPoset, s: int, t: int | None = None) -> dict:
    """mu(s, u) for every u in [s, t] (t defaults to the top)."""
    t = P.top if t is None else t
    if not P.le(s, t):
        raise NotComparable(f"{P.name(s)} is not below {P.name(t)}", witness=(s, t))
    upb = P.up_bits[s]
    down_bits = P.down_bits
    members = P.elements_of(upb & down_bits[t])
    mu = {s: 1}
    for u in members[1:]:
        total = 0
        for v in P.elements_of(upb & down_bits[u]):
            if v != u:
                total += mu[v]
        mu[u] = -total
    return mu


def mobius(P: GradedPoset, s: int, t: int) -> int:
    return mobius_row(P, s, t)[t]


def char_poly(P: GradedPoset, s: int | None = None, t: int | None = None) -> IntPoly:
    """chi(x) = sum over u in [s,t] of mu(s,u) x^(rk t - rk u)."""
    s = P.bottom if s is None else s
    t = P.top if t is None else t
    mu = mobius_row(P, s, t)
    rt = P.rank[t]
    coeffs = [0] * (rt - P.rank[s] + 1)
    for u, m in mu.items():
        coeffs[rt - P.rank[u]] += m
    return IntPoly(coeffs)


def reduced_char_poly(I, s: int | None = None, t: int | None = None) -> IntPoly:
    """chi / (x - 1) for an Interval, or for (P, s, t)."""
    if isinstance(I, Interval):
        P, s, t = I.parent, I.lo, I.hi
    else:
        P = I
        s = P.bottom if s is None else s
        t = P.top if t is None else t
    if P.rank[t] - P.rank[s] < 1 or not P.le(s, t):
        if not P.le(s, t):
            raise NotComparable(f"{P.name(s)} is not below {P.name(t)}", witness=(s, t))
        raise RankZeroInterval("reduced characteristic polynomial of a rank-0 interval")
    return char_poly(P, s, t).divide_by_x_minus(1)


@dataclass(frozen=True)
class WhitneyProfile:
    base: int
    counts: tuple


def _row_counts(P: GradedPoset, r: int) -> np.ndarray:
    """Array [element of level r, k] = number of rank r+k elements above it."""
    key = ("row_counts", r)
    got = P._memo.get(key)
    if got is None:
        cols = []
        for b in range(r, P.n + 1):
            m = P.reach(r, b)
            cols.append(np.diff(m.indptr))
        got = np.stack(cols, axis=1)
        P._memo[key] = got
    return got


def whitney_profile(P: GradedPoset, s: int) -> WhitneyProfile:
    row = _row_counts(P, P.rank[s])[P.local_index[s]]
    return WhitneyProfile(s, tuple(int(v) for v in row))


@dataclass(frozen=True)
class Uniformity:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def is_rank_uniform(P: GradedPoset) -> Uniformity:
    for r in range(P.n + 1):
        table = _row_counts(P, r)
        lv = P.levels[r]
        for i in range(1, len(lv)):
            if not np.array_equal(table[i], table[0]):
                return Uniformity(False, {
                    "rank": r,
                    "elements": [lv[0], lv[i]],
                    "names": [P.name(lv[0]), P.name(lv[i])],
                    "profiles": [[int(v) for v in table[0]], [int(v) for v in table[i]]],
                })
    return Uniformity(True)


def lower_whitney_matrix(P: GradedPoset):
    """(matrix, witness): M[i][j] = number of rank-j elements below a rank-i element.

    The witness is None when every rank has a single lower profile.
    """
    n = P.n
    M = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        lv = P.levels[i]
        for j in range(i + 1):
            counts = np.diff(P.reach(j, i).tocsc().indptr)
            if np.any(counts != counts[0]):
                k = int(np.argmax(counts != counts[0]))
                return None, {
                    "rank": i,
                    "lower_rank": j,
                    "elements": [lv[0], lv[k]],
                    "names": [P.name(lv[0]), P.name(lv[k])],
                    "counts": [int(counts[0]), int(counts[k])],
                }
            M[i][j] = int(counts[0])
    return M, None


def rank_select(P: GradedPoset, S: Iterable[int]) -> GradedPoset:
    """Induced poset on the ranks in S together with 0 and n."""
    n = P.n
    keep = sorted({r for r in S if 0 < r < n} | {0, n})
    elems = [e for r in keep for e in P.levels[r]]
    new = {e: i for i, e in enumerate(elems)}
    covers = []
    for a, b in zip(keep, keep[1:]):
        m = P.reach(a, b).tocoo()
        la, lb = P.levels[a], P.levels[b]
        covers.extend((new[la[i]], new[lb[j]]) for i, j in zip(m.row, m.col))
    names = tuple(P.name(e) for e in elems) if P.names else None
    return build_poset(covers, len(elems), names)


def truncate(P: GradedPoset, k: int = 1) -> GradedPoset:
    """Remove the top k intermediate ranks (k = n leaves a single point)."""
    n = P.n
    if k < 0 or k > n:
        raise ValueError(f"cannot truncate a rank-{n} poset {k} times")
    if k == n:
        return single_point()
    return rank_select(P, range(1, n - k))


# ---------------------------------------------------------------- flag vectors

def _proper(P: GradedPoset, S: Iterable[int]) -> tuple:
    return tuple(sorted({r for r in S if 0 < r < P.n}))


def flag_alpha(P: GradedPoset, S: Iterable[int]) -> int:
    """Number of chains meeting exactly the ranks of S (0 and n are free)."""
    T = _proper(P, S)
    if not T:
        return 1
    cache = P._memo.setdefault("alpha", {})
    got = cache.get(T)
    if got is not None:
        return got
    if P.maximal_chain_count < 2**62:
        v = np.ones(len(P.levels[T[0]]), dtype=np.int64)
        for a, b in zip(T, T[1:]):
            v = P.reach(a, b).T @ v
        val = int(v.sum())
    else:
        v = [1] * len(P.levels[T[0]])
        for a, b in zip(T, T[1:]):
            m = P.reach(a, b)
            w = [0] * m.shape[1]
            for i in range(m.shape[0]):
                vi = v[i]
                if vi:
                    for j in m.indices[m.indptr[i]:m.indptr[i + 1]]:
                        w[j] += vi
            v = w
        val = sum(v)
    cache[T] = val
    return val


def flag_beta(P: GradedPoset, S: Iterable[int]) -> int:
    T = _proper(P, S)
    total = 0
    for k in range(len(T) + 1):
        sign = -1 if (len(T) - k) % 2 else 1
        for sub in combinations(T, k):
            total += sign * flag_alpha(P, sub)
    return total


def flag_vector(P: GradedPoset, kind: str = "alpha") -> dict:
    """All values over subsets of {1..n-1}, keyed by sorted tuples."""
    f = flag_alpha if kind == "alpha" else flag_beta
    ranks = range(1, P.n)
    return {
        sub: f(P, sub) for k in range(P.n) for sub in combinations(ranks, k)
    }


def max_chains(I, limit: int = DEFAULT_MAX_CHAINS) -> list:
    """All saturated lo-hi chains in lexicographic order of element indices."""
    if isinstance(I, Interval):
        P, lo, hi = I.parent, I.lo, I.hi
    else:
        P, lo, hi = I, I.bottom, I.top
    total = count_max_chains(I)
    if total > limit:
        raise SizeLimitExceeded(f"{total} maximal chains exceed the limit {limit}")
    down_hi = P.down_bits[hi]
    pos = P.pos
    out = []

    def walk(e, path):
        if e == hi:
            out.append(tuple(path))
            return
        for t in P.up[e]:
            if down_hi >> pos[t] & 1:
                path.append(t)
                walk(t, path)
                path.pop()

    walk(lo, [lo])
    return out


def count_max_chains(I) -> int:
    if isinstance(I, Interval):
        P, lo, hi = I.parent, I.lo, I.hi
    else:
        return I.maximal_chain_count
    cnt = {lo: 1}
    for e in P.elements_of(P.up_bits[lo] & P.down_bits[hi]):
        c = cnt.get(e, 0)
        if c:
            for t in P.up[e]:
                cnt[t] = cnt.get(t, 0) + c
    return cnt.get(hi, 0)


def order_complex_polys(P: GradedPoset) -> tuple[IntPoly, IntPoly]:
    """f and h polynomials of the order complex of the proper part."""
    n = P.n
    d = n - 1
    if n == 0:
        return IntPoly([1]), IntPoly([1])
    ranks = range(1, n)
    f = [sum(flag_alpha(P, sub) for sub in combinations(ranks, i)) for i in range(n)]
    # h(y) = sum_i f_i y^i (1-y)^(d-i)
    h = [0] * (d + 1)
    for i, fi in enumerate(f):
        e = d - i
        for j in range(e + 1):
            h[i + j] += fi * comb(e, j) * (-1) ** j
    h_flag = [0] * (d + 1)
    for k in range(n):
        for sub in combinations(ranks, k):
            h_flag[k] += flag_beta(P, sub)
    if h != h_flag:
        raise AssertionError(f"h via transform {h} != h via flag beta {h_flag}")
    return IntPoly(f), IntPoly(h)
