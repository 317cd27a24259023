"""Exact univariate polynomials over the integers.

Everything here is exact: coefficients are Python ints, intermediate
remainders are Fractions brought back to primitive integer form, and
real roots are located with Sturm sequences and rational bisection.
No floating point is used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd as igcd
from typing import Iterable, Sequence

from .errors import (
    DegreeGap,
    DegreeTooHigh,
    InexactDivision,
    NotPalindromic,
    NotRealRooted,
    ZeroPolynomial,
)


def _as_int(a) -> int:
    if isinstance(a, bool):
        return int(a)
    if isinstance(a, int):
        return a
    if isinstance(a, Fraction):
        if a.denominator != 1:
            raise ValueError(f"non-integer coefficient {a}")
        return a.numerator
    if isinstance(a, str):
        return int(a)
    out = int(a)
    if out != a:
        raise ValueError(f"non-integer coefficient {a!r}")
    return out


class IntPoly:
    """Dense polynomial, ``coeffs[i]`` is the coefficient of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_as_int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls((0,) * k + (c,))

    @classmethod
    def one_plus_x_pow(cls, k: int) -> "IntPoly":
        return cls(comb(k, i) for i in range(k + 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_str

    # arithmetic
    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return IntPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-a for a in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(a * other for a in self.coeffs)
        if not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    out[i + j] += u * v
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IntPoly((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, k: int) -> "IntPoly":
        """Multiply by x**k."""
        return IntPoly((0,) * k + self.coeffs) if self.coeffs else IntPoly()

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose(self, inner: "IntPoly") -> "IntPoly":
        acc = IntPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = igcd(g, c)
        return g

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """Quotient when ``other`` divides ``self`` over the integers."""
        q, r = _qdivmod(_q(self), _q(other))
        if r:
            raise InexactDivision(f"{other} does not divide {self}")
        return IntPoly(q)

    def divide_by_x_minus(self, a: int) -> "IntPoly":
        """Synthetic division by (x - a); the remainder must vanish."""
        c = self.coeffs
        if not c:
            return IntPoly()
        out = [0] * (len(c) - 1)
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = acc * a + c[i]
            out[i - 1] = acc
        if acc * a + c[0] != 0:
            raise InexactDivision(f"{self} is not divisible by x - {a}")
        return IntPoly(out)


ZERO = IntPoly()
ONE = IntPoly((1,))
X = IntPoly((0, 1))


# ---------------------------------------------------------------- rationals
# Lists of Fractions, low degree first, always trimmed.

def _q(p: IntPoly) -> list:
    return [Fraction(c) for c in p.coeffs]


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qdivmod(a: list, b: list):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] / lb
        q[i] = c
        if c:
            for j in range(db + 1):
                a[i + j] -= c * b[j]
    return _trim(q), _trim(a[:db])


def _monic(a: list) -> list:
    lc = a[-1]
    return [c / lc for c in a]


def _qgcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _qdivmod(a, b)
        a, b = b, r
    return _monic(a) if a else []


def _qderiv(a: list) -> list:
    return _trim([i * c for i, c in enumerate(a) if i])


def _primitive(a: list) -> IntPoly:
    """Scale a rational polynomial by a positive constant to a primitive integer one."""
    if not a:
        return IntPoly()
    den = 1
    for c in a:
        den = den * c.denominator // igcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = igcd(g, c)
    return IntPoly(c // g for c in ints)


def gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient (zero if both zero)."""
    return _primitive(_qgcd(_q(f), _q(g)))


def squarefree_factors(f: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's decomposition f = c * prod a_i**i; returns the non-constant (a_i, i)."""
    if f.is_zero():
        raise ZeroPolynomial("square-free decomposition of 0")
    if f.degree <= 0:
        return []
    a = _monic(_q(f))
    da = _qderiv(a)
    g = _qgcd(a, da)
    b, _ = _qdivmod(a, g)
    c, _ = _qdivmod(da, g)
    d = _trim([x - y for x, y in _zip_pad(c, _qderiv(b))])
    out = []
    i = 1
    while len(b) > 1:
        ai = _qgcd(b, d)
        if len(ai) > 1:
            out.append((_primitive(ai), i))
        b, _ = _qdivmod(b, ai)
        c, _ = _qdivmod(d, ai)
        d = _trim([x - y for x, y in _zip_pad(c, _qderiv(b))])
        i += 1
    return out


def _zip_pad(a: list, b: list):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def squarefree_part(f: IntPoly) -> IntPoly:
    out = ONE
    for a, _ in squarefree_factors(f):
        out = out * a
    return out


# ---------------------------------------------------------------- Sturm

def sturm_sequence(p: IntPoly) -> list[IntPoly]:
    seq = [_primitive(_q(p))]
    if p.degree <= 0:
        return seq
    seq.append(_primitive(_q(p.derivative())))
    while seq[-1].degree > 0:
        _, r = _qdivmod(_q(seq[-2]), _q(seq[-1]))
        if not r:
            break
        seq.append(_primitive([-c for c in r]))
    return seq


def _sign_at(p: IntPoly, x: Fraction) -> int:
    # sign of p(n/d) * d**deg with d > 0: integer Horner, no fractions
    n, d = x.numerator, x.denominator
    acc = 0
    dp = 1
    for c in reversed(p.coeffs):
        acc = acc * n + c * dp
        dp *= d
    return (acc > 0) - (acc < 0)


def _variations(signs) -> int:
    v = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _var_at(seq, x) -> int:
    if x is None:  # +infinity
        return _variations(q.lead and (1 if q.lead > 0 else -1) for q in seq)
    if x == "-inf":
        return _variations(
            (1 if q.lead > 0 else -1) * (-1 if q.degree % 2 else 1) for q in seq
        )
    return _variations(_sign_at(q, x) for q in seq)


def count_roots(seq, lo, hi) -> int:
    """Distinct roots of the square-free seq[0] in (lo, hi]; None / '-inf' are infinities."""
    return _var_at(seq, "-inf" if lo is None else lo) - _var_at(seq, hi)


def cauchy_bound(f: IntPoly) -> Fraction:
    lead = abs(f.lead)
    return 1 + Fraction(max(abs(c) for c in f.coeffs[:-1]) if f.degree > 0 else 0, lead)


def _isolate(seq, bound: Fraction):
    lo, hi = -bound, bound
    out = []
    stack = [(lo, hi, count_roots(seq, lo, hi))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        left = count_roots(seq, a, m)
        stack.append((m, b, k - left))
        stack.append((a, m, left))
    out.sort()
    return out


def refine(seq, interval, width: Fraction | None = None, steps: int | None = None):
    """Bisect an isolating interval (lo, hi] of seq[0] until it is narrow enough."""
    a, b = interval
    n = 0
    while (width is not None and b - a > width) or (steps is not None and n < steps):
        m = (a + b) / 2
        if count_roots(seq, a, m) == 1:
            b = m
        else:
            a = m
        n += 1
    return a, b


@dataclass(frozen=True)
class RootCertificate:
    polynomial: IntPoly
    square_free_part: IntPoly
    distinct_real_root_count: int
    multiplicities: tuple
    isolating_intervals: tuple  # ((lo, hi], ...) as Fraction pairs, increasing
    all_real: bool
    all_nonpositive: bool
    factors: tuple = field(default=(), repr=False)

    def __bool__(self):
        return self.all_real and self.all_nonpositive

    def as_dict(self) -> dict:
        return {
            "distinct_real_roots": self.distinct_real_root_count,
            "multiplicities": list(self.multiplicities),
            "isolating_intervals": [[str(a), str(b)] for a, b in self.isolating_intervals],
            "all_real": self.all_real,
            "all_nonpositive": self.all_nonpositive,
        }


def _root_tags(factors, intervals):
    seqs = [(sturm_sequence(a), i) for a, i in factors]
    tags = []
    for lo, hi in intervals:
        hits = [i for s, i in seqs if count_roots(s, lo, hi) == 1]
        assert len(hits) == 1, "square-free factors must be coprime"
        tags.append(hits[0])
    return tags


def isolate_real_roots(f: IntPoly) -> RootCertificate:
    if f.is_zero():
        raise ZeroPolynomial("cannot certify the zero polynomial")
    if f.degree == 0:
        return RootCertificate(f, ONE, 0, (), (), True, True)
    factors = squarefree_factors(f)
    sqf = ONE
    for a, _ in factors:
        sqf = sqf * a
    seq = sturm_sequence(sqf)
    bound = cauchy_bound(sqf)
    intervals = _isolate(seq, bound)
    mults = _root_tags(factors, intervals)
    positive = count_roots(seq, Fraction(0), bound)
    return RootCertificate(
        polynomial=f,
        square_free_part=sqf,
        distinct_real_root_count=len(intervals),
        multiplicities=tuple(mults),
        isolating_intervals=tuple(intervals),
        all_real=sum(mults) == f.degree,
        all_nonpositive=positive == 0,
        factors=tuple(factors),
    )


def certify_real_rooted_nonpositive(f: IntPoly) -> RootCertificate:
    """Certificate whose truth value is 'all roots real and <= 0'."""
    return isolate_real_roots(f)


def is_real_rooted(f: IntPoly) -> bool:
    return f.is_zero() or isolate_real_roots(f).all_real


# ---------------------------------------------------------------- symmetry / gamma

def is_palindromic(f: IntPoly, d: int) -> bool:
    if f.degree > d:
        return False
    return all(f[i] == f[d - i] for i in range(d + 1))


def gamma_extract(f: IntPoly, d: int) -> IntPoly:
    """The unique g with f = sum g_i x^i (1+x)^(d-2i)."""
    if not is_palindromic(f, d):
        raise NotPalindromic(f"{f} is not palindromic about {d}/2", witness=list(f.coeffs))
    rest = [f[i] for i in range(d + 1)]
    out = []
    for i in range(d // 2 + 1):
        c = rest[i]
        out.append(c)
        if c:
            e = d - 2 * i
            for j in range(e + 1):
                rest[i + j] -= c * comb(e, j)
    assert not any(rest), "gamma basis expansion left a remainder"
    return IntPoly(out)


def gamma_expand(g: IntPoly, d: int) -> IntPoly:
    if g.degree > d // 2:
        raise DegreeTooHigh(f"degree {g.degree} exceeds {d}//2")
    out = [0] * (d + 1)
    for i, c in enumerate(g.coeffs):
        if c:
            e = d - 2 * i
            for j in range(e + 1):
                out[i + j] += c * comb(e, j)
    return IntPoly(out)


# ---------------------------------------------------------------- interlacing

def _joint_roots(f: IntPoly, g: IntPoly):
    """Distinct real roots of f*g in increasing order with their multiplicities in f and g.

    Shared roots are found exactly: c = gcd(f, g) is part of the square-free
    part of f*g, so a common root is a single isolated root carrying both
    multiplicities, never two nearby intervals.
    """
    fac_f = squarefree_factors(f)
    fac_g = squarefree_factors(g)
    # square-free part of f*g = sqf(f) * sqf(g) / gcd(sqf(f), sqf(g))
    sf = ONE
    for a, _ in fac_f:
        sf = sf * a
    sg = ONE
    for a, _ in fac_g:
        sg = sg * a
    common = gcd(sf, sg)
    joint = sf * sg.exact_div(common) if common.degree > 0 else sf * sg
    if joint.degree <= 0:
        return []
    seq = sturm_sequence(joint)
    intervals = _isolate(seq, cauchy_bound(joint))
    sf_seqs = [(sturm_sequence(a), i) for a, i in fac_f]
    sg_seqs = [(sturm_sequence(a), i) for a, i in fac_g]
    out = []
    for lo, hi in intervals:
        mf = sum(i for s, i in sf_seqs if count_roots(s, lo, hi) == 1)
        mg = sum(i for s, i in sg_seqs if count_roots(s, lo, hi) == 1)
        out.append((mf, mg))
    return out


def interlaces(f: IntPoly, g: IntPoly) -> bool:
    """Decide f ⪯ g for real-rooted f, g of positive leading coefficient sign-agnostically.

    The roots (with multiplicity) alpha_1 >= ... >= alpha_n of f and
    beta_1 >= ... of g must satisfy beta_{i+1} <= alpha_i <= beta_i.
    """
    df, dg = f.degree, g.degree
    if dg not in (df, df + 1):
        return False
    roots = _joint_roots(f, g)
    # expand to descending lists of root ranks (index into the joint root list)
    alpha = [k for k in range(len(roots) - 1, -1, -1) for _ in range(roots[k][0])]
    beta = [k for k in range(len(roots) - 1, -1, -1) for _ in range(roots[k][1])]
    if len(alpha) != df or len(beta) != dg:
        return False
    for i in range(df):
        if alpha[i] > beta[i]:
            return False
        if i + 1 < dg and beta[i + 1] > alpha[i]:
            return False
    return True


def certify_interlacing(f: IntPoly, g: IntPoly) -> bool:
    """Exact decision of f ⪯ g (zeros weakly alternate, g holding the largest one)."""
    if f.is_zero() or g.is_zero():
        return True
    for name, p in (("f", f), ("g", g)):
        if not isolate_real_roots(p).all_real:
            raise NotRealRooted(f"{name} = {p} is not real-rooted", witness={name: list(p.coeffs)})
    df, dg = f.degree, g.degree
    if df >= 2 and dg >= 2 and abs(dg - df) >= 2:
        raise DegreeGap(f"degrees {df} and {dg} differ by at least 2")
    if df == 0:
        return dg <= 1
    if f.lead < 0:
        f = -f
    if g.lead < 0:
        g = -g
    return interlaces(f, g)


def zeros_interlace(f: IntPoly, g: IntPoly) -> bool:
    """Undirected relation: f ⪯ g or g ⪯ f."""
    return certify_interlacing(f, g) or certify_interlacing(g, f)


def wronskian(f: IntPoly, g: IntPoly) -> IntPoly:
    return f.derivative() * g - f * g.derivative()


def wronskian_nonneg(f: IntPoly, g: IntPoly) -> bool:
    """Exactly decide f'g - fg' >= 0 on the whole real line."""
    w = wronskian(f, g)
    if w.is_zero():
        return True
    if w.degree == 0:
        return w.lead > 0
    cert = isolate_real_roots(w)
    if any(m % 2 for m in cert.multiplicities):
        return False
    seq = sturm_sequence(cert.square_free_part)
    ivs = [tuple(iv) for iv in cert.isolating_intervals]
    # separate neighbouring intervals strictly, then sample between them
    for k in range(len(ivs) - 1):
        while ivs[k][1] >= ivs[k + 1][0]:
            ivs[k] = refine(seq, ivs[k], steps=1)
            ivs[k + 1] = refine(seq, ivs[k + 1], steps=1)
    if not ivs:
        samples = [Fraction(0)]
    else:
        samples = [ivs[0][0] - 1, ivs[-1][1] + 1]
        samples += [(ivs[k][1] + ivs[k + 1][0]) / 2 for k in range(len(ivs) - 1)]
    return all(_sign_at(w, s) >= 0 for s in samples)
