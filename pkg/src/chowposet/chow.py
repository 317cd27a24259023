"""Chow and augmented Chow polynomials, their gamma vectors and refinements.

Two independent routes are provided throughout:

* the incidence-algebra recursion over upper intervals, using Möbius values
  and reduced characteristic polynomials;
* the stable-set expansion in the flag h-vector, which only needs chain
  counts through selected ranks.

Refinements by first label (gamma and h families) are computed both by a
descent DP over labeled covers and by the transfer-matrix recursion driven
by per-rank widths and descent counts.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import MethodDisagreement, NotEL, NotLowerRankUniform, NotUMEL, ChowPosetError
from .labeling import EdgeLabeling, NonUniform, is_umel, local_stats, rank_stats, verify_el
from .poly import ONE, IntPoly, certify_interlacing, certify_real_rooted_nonpositive, gamma_extract
from .poset import (
    GradedPoset,
    add_bottom,
    dual,
    flag_beta,
    interval,
    lower_whitney_matrix,
    order_complex_polys,
    rank_select,
    truncate,
)

Y = IntPoly((0, 1))


def stable_subsets(universe) -> list[tuple]:
    """Subsets of the sorted sequence with no two members adjacent in it."""
    items = tuple(sorted(universe))

    @lru_cache(maxsize=None)
    def tail(i):
        if i >= len(items):
            return ((),)
        skip = tail(i + 1)
        take = tuple((items[i],) + rest for rest in tail(i + 2))
        return skip + take

    return sorted(tail(0), key=lambda s: (len(s), s))


# ---------------------------------------------------------------- recursion

def _padd(a: list, b: list):
    if len(a) < len(b):
        a.extend([0] * (len(b) - len(a)))
    for i, v in enumerate(b):
        a[i] += v


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return out


def upper_chow_table(P: GradedPoset) -> dict:
    """Chow polynomial of every upper interval [s, top], by the defining recursion.

    H[s] = sum over u > s of rchi_{[s,u]}(x) * H[u], with H[top] = 1; the
    Möbius row of s is accumulated interval by interval from bitsets.
    """
    got = P._memo.get("chow_upper")
    if got is not None:
        return got
    up_bits, down_bits = P.up_bits, P.down_bits
    rank = P.rank
    H = {P.top: [1]}
    for s in reversed(P.order):
        if s == P.top:
            continue
        ub = up_bits[s]
        members = P.elements_of(ub)
        mu = {s: 1}
        acc = []
        for u in members[1:]:
            ru = rank[u]
            chi = [0] * (ru - rank[s] + 1)
            total = 0
            for v in P.elements_of(ub & down_bits[u]):
                if v != u:
                    m = mu[v]
                    total += m
                    chi[ru - rank[v]] += m
            mu[u] = -total
            chi[0] -= total
            # divide by (x - 1)
            q = [0] * (len(chi) - 1)
            c = 0
            for i in range(len(chi) - 1, 0, -1):
                c += chi[i]
                q[i - 1] = c
            assert c + chi[0] == 0, "characteristic polynomial must vanish at 1"
            _padd(acc, _pmul(q, H[u]))
        H[s] = acc
    out = {s: IntPoly(c) for s, c in H.items()}
    P._memo["chow_upper"] = out
    return out


def _chow_flag(P: GradedPoset, augmented: bool) -> IntPoly:
    n = P.n
    if n == 0:
        return ONE
    first = 1 if augmented else 2
    d = n if augmented else n - 1
    total = IntPoly()
    for S in stable_subsets(range(first, n)):
        b = flag_beta(P, S)
        if b:
            total = total + IntPoly.one_plus_x_pow(d - 2 * len(S)).shift(len(S)) * b
    return total


def chow_poly(P: GradedPoset, method: str = "recursion") -> IntPoly:
    if method == "recursion":
        return upper_chow_table(P)[P.bottom]
    if method == "flag":
        return _chow_flag(P, augmented=False)
    raise ValueError(f"unknown method {method!r}")


def aug_chow_poly(P: GradedPoset, method: str = "sum") -> IntPoly:
    if method == "sum":
        H = upper_chow_table(P)
        total = IntPoly()
        for s in range(P.count):
            total = total + H[s].shift(P.rank[s])
        return total
    if method == "adjoin":
        return chow_poly(add_bottom(P), "recursion")
    if method == "flag":
        return _chow_flag(P, augmented=True)
    raise ValueError(f"unknown method {method!r}")


def chow_all_methods(P: GradedPoset, augmented: bool, recursion_limit: int | None = 6000):
    """Values by every applicable method; the recursion is skipped above recursion_limit elements."""
    methods = ("sum", "adjoin", "flag") if augmented else ("recursion", "flag")
    out = {}
    for m in methods:
        if m != "flag" and recursion_limit is not None and P.count > recursion_limit:
            continue
        out[m] = aug_chow_poly(P, m) if augmented else chow_poly(P, m)
    return out


def gamma_of(P: GradedPoset, augmented: bool, method: str = "flag") -> IntPoly:
    """Gamma vector of the (augmented) Chow polynomial; method 'flag' or 'recursion'."""
    if augmented:
        return gamma_extract(aug_chow_poly(P, "flag" if method == "flag" else "sum"), P.n)
    return gamma_extract(chow_poly(P, method), max(P.n - 1, 0))


# ---------------------------------------------------------------- descent DP

def _require_el(P, lab):
    el = verify_el(P, lab)
    if not el:
        raise NotEL("labeling is not an EL-labeling", witness=el.witness)


def _require_umel(P, lab):
    rep = is_umel(P, lab)
    if not rep:
        raise NotUMEL(f"labeling is not UMEL ({rep.failed} fails)", witness=rep.detail)
    return rep.stats


class _NddCounter:
    """Chains to the top avoiding two consecutive descents, weighted by y^descents.

    State: (element, incoming label, whether the incoming step was a descent).
    """

    def __init__(self, P, lab):
        self.P, self.lab = P, lab
        self.memo = {}

    def __call__(self, v, incoming, was_descent):
        key = (v, incoming, was_descent)
        got = self.memo.get(key)
        if got is not None:
            return got
        P = self.P
        if v == P.top:
            res = ONE
        else:
            res = IntPoly()
            for w in P.up[v]:
                l = self.lab(v, w)
                if l < incoming:
                    if not was_descent:
                        res = res + self(w, l, True).shift(1)
                else:
                    res = res + self(w, l, False)
        self.memo[key] = res
        return res


def stable_descent_gamma(P: GradedPoset, lab: EdgeLabeling, augmented: bool) -> IntPoly:
    """Sum of y^|Des| over maximal chains with no two consecutive descents
    (and no descent at position 1 unless augmented)."""
    g = gamma_refined(P, lab, "enumerate")
    return sum((g.all if augmented else g.ascent), IntPoly())


@dataclass(frozen=True)
class GammaRefinement:
    rank: int
    all: tuple
    ascent: tuple
    descent: tuple

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "all": [list(p.coeffs) for p in self.all],
            "ascent": [list(p.coeffs) for p in self.ascent],
            "descent": [list(p.coeffs) for p in self.descent],
        }


@dataclass(frozen=True)
class HRefinement:
    corank: int
    element: int
    h: tuple

    def total(self) -> IntPoly:
        return sum(self.h, IntPoly())


@dataclass(frozen=True)
class TransferMatrix:
    rows: tuple  # rows[i][j] is an IntPoly in {omega*y, omega, 0}

    def apply(self, vec) -> tuple:
        return tuple(sum((a * v for a, v in zip(row, vec)), IntPoly()) for row in self.rows)


def h_transfer_matrix(widths, des, next_ell) -> TransferMatrix:
    """Row i: omega(i)*y on columns j <= des(i), omega(i) beyond."""
    rows = []
    for w, d in zip(widths, des):
        rows.append(tuple(Y * w if j < d else IntPoly((w,)) for j in range(next_ell)))
    return TransferMatrix(tuple(rows))


def gamma_transfer_matrices(widths, des, next_ell):
    """(A_ascent acting on 'all', A_descent acting on 'ascent') for one rank."""
    asc, desc = [], []
    for w, d in zip(widths, des):
        asc.append(tuple(IntPoly((w,)) if j >= d else IntPoly() for j in range(next_ell)))
        desc.append(tuple(Y * w if j < d else IntPoly() for j in range(next_ell)))
    return TransferMatrix(tuple(asc)), TransferMatrix(tuple(desc))


def gamma_refined(P: GradedPoset, lab: EdgeLabeling, method: str = "enumerate") -> GammaRefinement:
    n = P.n
    if n == 0:
        raise ChowPosetError("refinements need rank >= 1")
    if method == "enumerate":
        _require_el(P, lab)
        labs = lab.above[P.bottom]
        ell = len(labs)
        asc = [IntPoly()] * ell
        desc = [IntPoly()] * ell
        walk = _NddCounter(P, lab)
        for a in P.up[P.bottom]:
            l0 = lab(P.bottom, a)
            i = bisect_left(labs, l0)
            if a == P.top:
                asc[i] = asc[i] + ONE
                continue
            for w in P.up[a]:
                l1 = lab(a, w)
                if l1 >= l0:
                    asc[i] = asc[i] + walk(w, l1, False)
                else:
                    desc[i] = desc[i] + walk(w, l1, True).shift(1)
        return GammaRefinement(n, tuple(a + d for a, d in zip(asc, desc)), tuple(asc), tuple(desc))
    if method == "recurse":
        st = _require_umel(P, lab)
        asc, alls = (ONE,), (ONE,)
        desc = (IntPoly(),)
        for k in range(n - 2, -1, -1):
            A_up, A_down = gamma_transfer_matrices(st.widths[k], st.des[k], st.ell[k + 1])
            asc, desc = A_up.apply(alls), A_down.apply(asc)
            alls = tuple(a + d for a, d in zip(asc, desc))
        return GammaRefinement(n, alls, asc, desc)
    raise ValueError(f"unknown method {method!r}")


def _h_from(P, lab, memo, v, incoming):
    key = (v, incoming)
    got = memo.get(key)
    if got is None:
        if v == P.top:
            got = ONE
        else:
            got = IntPoly()
            for w in P.up[v]:
                l = lab(v, w)
                sub = _h_from(P, lab, memo, w, l)
                got = got + (sub.shift(1) if l < incoming else sub)
        memo[key] = got
    return got


def h_refined(P: GradedPoset, lab: EdgeLabeling, method: str = "enumerate") -> list[HRefinement]:
    """h-vectors refined by first label index, for coranks 1..n.

    Each corank is represented by its first element; under rank-uniformity
    every element of that corank gives the same vector.
    """
    n = P.n
    if method == "enumerate":
        _require_el(P, lab)
        memo = {}
        out = []
        for c in range(1, n + 1):
            s = P.levels[n - c][0]
            labs = lab.above[s]
            vec = [IntPoly()] * len(labs)
            for w in P.up[s]:
                l = lab(s, w)
                i = bisect_left(labs, l)
                vec[i] = vec[i] + _h_from(P, lab, memo, w, l)
            out.append(HRefinement(c, s, tuple(vec)))
        return out
    if method == "recurse":
        st = _require_umel(P, lab)
        out = []
        vec = (ONE,)
        if n >= 1:
            out.append(HRefinement(1, P.levels[n - 1][0], vec))
        for c in range(2, n + 1):
            k = n - c
            vec = h_transfer_matrix(st.widths[k], st.des[k], st.ell[k + 1]).apply(vec)
            out.append(HRefinement(c, P.levels[k][0], vec))
        return out
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------- rank selection

def descent_set_counts(P: GradedPoset, lab: EdgeLabeling) -> dict:
    """Number of maximal chains per descent set (frozenset of positions)."""
    n = P.n
    memo = {}

    def from_(v, incoming, depth):
        # depth = position of the incoming label (1-based)
        key = (v, incoming)
        got = memo.get(key)
        if got is not None:
            return got
        res = {}
        if v == P.top:
            res[0] = 1
        else:
            for w in P.up[v]:
                l = lab(v, w)
                bit = 1 << (depth - 1) if (incoming is not None and l < incoming) else 0
                for mask, c in from_(w, l, depth + 1).items():
                    res[mask | bit] = res.get(mask | bit, 0) + c
        memo[key] = res
        return res

    counts = from_(P.bottom, None, 0) if n else {0: 1}
    return {frozenset(i + 1 for i in range(n) if m >> i & 1): c for m, c in counts.items()}


def rank_selected_gamma(P: GradedPoset, lab: EdgeLabeling, S, check: bool = True):
    """(gamma of the Chow polynomial, gamma of the augmented one) of the rank selection P_S."""
    _require_el(P, lab)
    S = tuple(sorted({r for r in S if 0 < r < P.n}))
    beta = descent_set_counts(P, lab)
    nonaug = IntPoly()
    aug = IntPoly()
    for T in stable_subsets(S):
        b = beta.get(frozenset(T), 0)
        term = IntPoly.monomial(len(T), b)
        aug = aug + term
        if not T or T[0] != S[0]:
            nonaug = nonaug + term
    if not S:
        nonaug = aug = ONE
    if check:
        Q = rank_select(P, S)
        other = (gamma_of(Q, False), gamma_of(Q, True))
        if other != (nonaug, aug):
            raise MethodDisagreement(
                "rank-selected gamma disagrees with the rank-selected poset",
                witness={"S": list(S), "descent_route": [list(nonaug), list(aug)],
                         "poset_route": [list(other[0]), list(other[1])]},
            )
    return nonaug, aug


# ---------------------------------------------------------------- identities and batteries

def duality_identities(P: GradedPoset) -> dict:
    """Chow of the dual vs augmented Chow of the truncation, and augmented Chow of both."""
    D = dual(P)
    lhs1, rhs1 = chow_poly(D, "flag"), aug_chow_poly(truncate(P, 1) if P.n >= 1 else P, "flag")
    lhs2, rhs2 = aug_chow_poly(D, "flag"), aug_chow_poly(P, "flag")
    return {
        "chow_dual_eq_aug_truncation": (lhs1 == rhs1, lhs1, rhs1),
        "aug_dual_eq_aug": (lhs2 == rhs2, lhs2, rhs2),
    }


@dataclass
class BatteryReport:
    checks: list = field(default_factory=list)  # (name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(c[1] for c in self.checks)

    def __bool__(self):
        return self.ok

    def add(self, name, ok, detail=None):
        self.checks.append((name, bool(ok), detail))

    def failures(self):
        return [c for c in self.checks if not c[1]]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": n, "pass": ok, "detail": d} for n, ok, d in self.checks],
        }


def _interlace(report, name, f, g):
    try:
        ok = certify_interlacing(f, g)
        report.add(name, ok, {"f": list(f.coeffs), "g": list(g.coeffs)})
    except ChowPosetError as exc:
        report.add(name, False, {"error": type(exc).__name__, "message": str(exc),
                                 "f": list(f.coeffs), "g": list(g.coeffs)})


def interlacing_battery(P: GradedPoset, lab: EdgeLabeling) -> BatteryReport:
    st = _require_umel(P, lab)
    rep = BatteryReport()
    g_bar = gamma_of(P, False)
    g_aug = gamma_of(P, True)
    _interlace(rep, "gamma(chow) <= gamma(aug)", g_bar, g_aug)
    atomic = None
    if P.n >= 2:
        ell, ell_next = st.ell[0], st.ell[1]
        atomic = st.des[0][ell - 1] == ell_next
    rep.add("atomic precondition des_0(l) = l'", True, {"holds": atomic})
    for a in P.atoms():
        Q = interval(P, a, P.top).as_poset()
        ga = gamma_of(Q, True)
        tag = P.name(a)
        _interlace(rep, f"gamma(aug[{tag},1]) <= gamma(chow)", ga, g_bar)
        _interlace(rep, f"gamma(aug[{tag},1]) <= gamma(aug)", ga, g_aug)
        if atomic:
            _interlace(rep, f"gamma(chow[{tag},1]) <= gamma(chow)", gamma_of(Q, False), g_bar)
    for name, (ok, lhs, rhs) in duality_identities(P).items():
        rep.add(name, ok, {"lhs": list(lhs.coeffs), "rhs": list(rhs.coeffs)})
    return rep


def interlacing_grid(ref: GammaRefinement) -> BatteryReport:
    """Pairwise interlacing inside and across the ascent / all / descent rows."""
    rep = BatteryReport()
    rows = {"ascent": ref.ascent, "all": ref.all, "descent": ref.descent}
    ell = len(ref.all)
    for name, row in rows.items():
        for i in range(ell):
            for j in range(i + 1, ell):
                _interlace(rep, f"{name}[{i + 1}] <= {name}[{j + 1}]", row[i], row[j])
    for i in range(ell):
        for j in range(ell):
            if i <= j:
                _interlace(rep, f"ascent[{i + 1}] <= all[{j + 1}]", ref.ascent[i], ref.all[j])
                _interlace(rep, f"all[{i + 1}] <= descent[{j + 1}]", ref.all[i], ref.descent[j])
            _interlace(rep, f"ascent[{i + 1}] <= descent[{j + 1}]", ref.ascent[i], ref.descent[j])
    return rep


def h_interlacing_grid(refs) -> BatteryReport:
    rep = BatteryReport()
    for r in refs:
        for i in range(len(r.h)):
            for j in range(i + 1, len(r.h)):
                _interlace(rep, f"h_{r.corank}[{i + 1}] <= h_{r.corank}[{j + 1}]", r.h[i], r.h[j])
    return rep


def real_rootedness_report(P: GradedPoset) -> BatteryReport:
    rep = BatteryReport()
    polys = {
        "chow": chow_poly(P, "flag"),
        "aug_chow": aug_chow_poly(P, "flag"),
        "h": order_complex_polys(P)[1],
    }
    for name, f in polys.items():
        cert = certify_real_rooted_nonpositive(f)
        rep.add(name, bool(cert), {"coeffs": list(f.coeffs), **cert.as_dict()})
    return rep


# ---------------------------------------------------------------- total nonnegativity

def _det(m) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


@dataclass(frozen=True)
class TNResult:
    ok: bool
    matrix: tuple | None
    reason: str | None = None
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def tn_check(P: GradedPoset, strict: bool = False) -> TNResult:
    """Total nonnegativity of the lower Whitney matrix.

    A poset that is not lower rank-uniform has no such matrix; it fails the
    test (or raises NotLowerRankUniform when strict).
    """
    M, bad = lower_whitney_matrix(P)
    if M is None:
        if strict:
            raise NotLowerRankUniform("lower Whitney numbers vary within a rank", witness=bad)
        return TNResult(False, None, "not lower rank-uniform", bad)
    size = len(M)
    for k in range(1, size + 1):
        for rows in combinations(range(size), k):
            for cols in combinations(range(size), k):
                d = _det([[M[i][j] for j in cols] for i in rows])
                if d < 0:
                    return TNResult(False, tuple(map(tuple, M)), "negative minor",
                                    {"rows": list(rows), "cols": list(cols), "minor": d})
    return TNResult(True, tuple(map(tuple, M)))
