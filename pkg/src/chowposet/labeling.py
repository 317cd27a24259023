"""Edge labelings, the EL property and the local width/descent statistics."""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property

from .errors import MissingCover, NotACover, NotEL, TopElement
from .poset import GradedPoset


class EdgeLabeling:
    """Integer label on every cover of a poset."""

    def __init__(self, poset: GradedPoset, labels: dict, alphabet=None):
        self.poset = poset
        self.labels = labels
        self.alphabet = alphabet  # original labels when they were not integers

    def __call__(self, s: int, t: int) -> int:
        return self.labels[(s, t)]

    def __repr__(self):
        return f"EdgeLabeling({len(self.labels)} covers)"

    @cached_property
    def above(self) -> tuple:
        """Sorted distinct labels on the covers going up from each element."""
        P = self.poset
        lab = self.labels
        return tuple(tuple(sorted({lab[(s, t)] for t in P.up[s]})) for s in range(P.count))

    def triples(self) -> list:
        return [(s, t, self.labels[(s, t)]) for s, t in self.poset.covers]

    def chain_labels(self, chain) -> tuple:
        return tuple(self.labels[(a, b)] for a, b in zip(chain, chain[1:]))

    def restrict(self, sub: GradedPoset, old_of_new) -> "EdgeLabeling":
        return EdgeLabeling(
            sub, {(s, t): self.labels[(old_of_new[s], old_of_new[t])] for s, t in sub.covers}
        )


def attach_labeling(P: GradedPoset, triples) -> EdgeLabeling:
    """Validate (lower, upper, label) triples covering each cover exactly once."""
    covers = set(P.covers)
    raw = {}
    for s, t, lab in triples:
        s, t = int(s), int(t)
        if (s, t) not in covers:
            raise NotACover(f"({s}, {t}) is not a cover", witness=(s, t))
        if (s, t) in raw and raw[(s, t)] != lab:
            raise NotACover(f"cover ({s}, {t}) labeled twice", witness=(s, t))
        raw[(s, t)] = lab
    missing = covers - raw.keys()
    if missing:
        s, t = min(missing)
        raise MissingCover(f"cover ({s}, {t}) has no label", witness=(s, t))
    values = set(raw.values())
    if all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        return EdgeLabeling(P, raw)
    alphabet = tuple(sorted(values))
    code = {v: i + 1 for i, v in enumerate(alphabet)}
    return EdgeLabeling(P, {k: code[v] for k, v in raw.items()}, alphabet)


def chain_descent_set(labels) -> frozenset:
    """Positions i (1-based) with labels[i-1] > labels[i]."""
    labels = tuple(labels)
    return frozenset(i + 1 for i in range(len(labels) - 1) if labels[i] > labels[i + 1])


@dataclass(frozen=True)
class ELResult:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def verify_el(P: GradedPoset, lab: EdgeLabeling) -> ELResult:
    """Check every interval for a unique weakly increasing, lexicographically first chain.

    For each upper end t, elements u below t are processed from the top
    down; for each u we keep the (at most one) weakly increasing chain to
    t and the lexicographically smallest label word to t.
    """
    labels = lab.labels
    pos = P.pos
    for t in P.order:
        dt = P.down_bits[t]
        inc = {t: ((), (t,))}  # u -> (label word, chain) of the increasing chain
        lexmin = {t: ()}
        for u in reversed(P.elements_of(dt)):
            if u == t:
                continue
            found = []
            best = None
            for w in P.up[u]:
                if not dt >> pos[w] & 1:
                    continue
                lw = labels[(u, w)]
                word = (lw,) + lexmin[w]
                if best is None or word < best:
                    best = word
                got = inc.get(w)
                if got is not None and (not got[0] or lw <= got[0][0]):
                    found.append(((lw,) + got[0], (u,) + got[1]))
            lexmin[u] = best
            if len(found) != 1:
                return ELResult(False, {
                    "interval": [u, t],
                    "names": [P.name(u), P.name(t)],
                    "reason": f"{len(found)} weakly increasing maximal chains",
                    "increasing_chains": [list(c) for _, c in found],
                    "labels": [list(wd) for wd, _ in found],
                })
            inc[u] = found[0]
            if found[0][0] != best:
                return ELResult(False, {
                    "interval": [u, t],
                    "names": [P.name(u), P.name(t)],
                    "reason": "increasing chain is not lexicographically first",
                    "increasing_chains": [list(found[0][1])],
                    "labels": [list(found[0][0])],
                    "lexicographic_minimum": list(best),
                })
    return ELResult(True)


@dataclass(frozen=True)
class LocalStats:
    element: int
    labels: tuple  # distinct labels above the element, increasing
    widths: tuple  # widths[i-1] = number of covers carrying labels[i-1]
    index: dict  # cover t -> Ind(s, t), 1-based
    des: dict  # cover t -> des_s(t)

    @property
    def ell(self) -> int:
        return len(self.labels)

    def des_by_index(self):
        """Descent count per label index, or None where covers of one index disagree."""
        out = [None] * len(self.labels)
        for t, i in self.index.items():
            d = self.des[t]
            if out[i - 1] is None:
                out[i - 1] = d
            elif out[i - 1] != d:
                return None
        return tuple(out)


def local_stats(P: GradedPoset, lab: EdgeLabeling, s: int) -> LocalStats:
    if s == P.top:
        raise TopElement("no covers above the top element")
    above = lab.above
    labs = above[s]
    widths = [0] * len(labs)
    index, des = {}, {}
    for t in P.up[s]:
        l = lab(s, t)
        i = bisect_left(labs, l)
        widths[i] += 1
        index[t] = i + 1
        des[t] = bisect_left(above[t], l)  # labels above t strictly below l
    return LocalStats(s, labs, tuple(widths), index, des)


@dataclass(frozen=True)
class RankLabelStats:
    ell: tuple  # per rank k < n
    widths: tuple  # per rank: tuple of omega_k(i)
    des: tuple  # per rank: tuple of des_k(i)

    def as_dict(self) -> dict:
        return {
            "ell": list(self.ell),
            "widths": [list(w) for w in self.widths],
            "des": [list(d) for d in self.des],
        }


@dataclass(frozen=True)
class NonUniform:
    witness: dict

    def __bool__(self):
        return False


def rank_stats(P: GradedPoset, lab: EdgeLabeling, check_el: bool = True):
    """Per-rank widths and descent counts, or a NonUniform witness."""
    if check_el:
        el = verify_el(P, lab)
        if not el:
            raise NotEL("labeling is not an EL-labeling", witness=el.witness)
    ells, widths, dess = [], [], []
    for k in range(P.n):
        ref = None
        for s in P.levels[k]:
            st = local_stats(P, lab, s)
            d = st.des_by_index()
            if d is None:
                bad = sorted(st.index)
                return NonUniform({
                    "rank": k,
                    "elements": [s],
                    "names": [P.name(s)],
                    "reason": "covers with the same label index have different descent counts",
                    "des": {P.name(t): st.des[t] for t in bad},
                })
            sig = (st.widths, d)
            if ref is None:
                ref = (s, sig)
            elif sig != ref[1]:
                return NonUniform({
                    "rank": k,
                    "elements": [ref[0], s],
                    "names": [P.name(ref[0]), P.name(s)],
                    "widths": [list(ref[1][0]), list(st.widths)],
                    "des": [list(ref[1][1]), list(d)],
                })
        ells.append(len(ref[1][0]))
        widths.append(ref[1][0])
        dess.append(ref[1][1])
    return RankLabelStats(tuple(ells), tuple(widths), tuple(dess))


@dataclass(frozen=True)
class UMELReport:
    ok: bool
    failed: str | None = None
    detail: dict | None = None
    stats: RankLabelStats | None = field(default=None, compare=False)

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        out = {"ok": self.ok, "failed": self.failed, "detail": self.detail}
        if self.stats is not None:
            out["stats"] = self.stats.as_dict()
        return out


def is_umel(P: GradedPoset, lab: EdgeLabeling) -> UMELReport:
    el = verify_el(P, lab)
    if not el:
        return UMELReport(False, "el", el.witness)
    st = rank_stats(P, lab, check_el=False)
    if isinstance(st, NonUniform):
        return UMELReport(False, "rank-uniform", st.witness)
    for k, d in enumerate(st.des):
        for i in range(len(d) - 1):
            if d[i] > d[i + 1]:
                return UMELReport(False, "monotonic", {"rank": k, "des": list(d), "index": i + 1}, st)
    return UMELReport(True, None, None, st)


def increasing_chain_counts(P: GradedPoset, lab: EdgeLabeling, s: int, k: int) -> list:
    """Weakly increasing saturated chains s = s_0 < ... < s_k, counted by the index
    of the last label among the distinct labels above s_{k-1} (direct DP)."""
    if k < 1:
        raise ValueError("chains of length >= 1 only")
    above = lab.above
    # state: (element, last label) -> count
    states = {(s, None): 1}
    for _ in range(k - 1):
        nxt = {}
        for (e, last), c in states.items():
            for t in P.up[e]:
                l = lab(e, t)
                if last is None or l >= last:
                    nxt[(t, l)] = nxt.get((t, l), 0) + c
        states = nxt
    width = max((len(above[e]) for e, _ in states), default=0)
    out = [0] * width
    for (e, last), c in states.items():
        for t in P.up[e]:
            l = lab(e, t)
            if last is None or l >= last:
                out[bisect_left(above[e], l)] += c
    return out


def refined_whitney_recursive(stats: RankLabelStats, r: int, k: int) -> list:
    """The same counts from per-rank widths and descents alone.

    W_1^i = omega_r(i) and W_{k+1}^i = omega_{r+k}(i) * sum of W_k^j over the
    indices j with des_{r+k-1}(j) < i: a label may follow the previous one
    exactly when its index exceeds the previous label's descent count.
    """
    W = list(stats.widths[r])
    for step in range(1, k):
        rank = r + step
        des_prev = stats.des[rank - 1]
        W = [
            w * sum(Wj for Wj, d in zip(W, des_prev) if d < i)
            for i, w in enumerate(stats.widths[rank], start=1)
        ]
    return W
