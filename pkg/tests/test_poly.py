import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from chowposet.errors import DegreeGap, DegreeTooHigh, InexactDivision, NotPalindromic, NotRealRooted, ZeroPolynomial
from chowposet.poly import (
    IntPoly,
    certify_interlacing,
    certify_real_rooted_nonpositive,
    count_roots,
    gamma_expand,
    gamma_extract,
    gcd,
    is_palindromic,
    isolate_real_roots,
    squarefree_factors,
    sturm_sequence,
    wronskian,
    wronskian_nonneg,
    zeros_interlace,
)

from conftest import interlace_from_roots, rational_rooted

x = sympy.Symbol("x")
coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=8)


def to_sympy(f: IntPoly):
    return sympy.Poly(list(reversed(f.coeffs)) or [0], x)


# ---------------------------------------------------------------- arithmetic

@given(coeff_lists, coeff_lists)
def test_arithmetic_matches_sympy(a, b):
    f, g = IntPoly(a), IntPoly(b)
    assert to_sympy(f * g) == to_sympy(f) * to_sympy(g)
    assert to_sympy(f + g) == to_sympy(f) + to_sympy(g)
    assert to_sympy(f - g) == to_sympy(f) - to_sympy(g)
    assert to_sympy(f.derivative()) == to_sympy(f).diff(x)


def test_trailing_zeros_trimmed_and_str():
    assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPoly([1, 14, 1]).to_str() == "x^2 + 14x + 1"
    assert IntPoly([0, -1]).to_str("y") == "-y"
    assert str(IntPoly()) == "0"


def test_exact_division():
    f = IntPoly([1, 1]) * IntPoly([-2, 1])
    assert f.exact_div(IntPoly([1, 1])) == IntPoly([-2, 1])
    assert f.divide_by_x_minus(2) == IntPoly([1, 1])
    with pytest.raises(InexactDivision):
        f.divide_by_x_minus(3)
    with pytest.raises(InexactDivision):
        f.exact_div(IntPoly([3, 1]))


@given(coeff_lists, coeff_lists)
def test_gcd_matches_sympy(a, b):
    f, g = IntPoly(a), IntPoly(b)
    if f.is_zero() or g.is_zero():
        return
    ours = to_sympy(gcd(f, g))
    theirs = sympy.gcd(to_sympy(f), to_sympy(g))
    assert ours.monic() == theirs.monic()


@given(coeff_lists)
def test_squarefree_factors_reassemble(a):
    f = IntPoly(a)
    if f.degree < 1:
        return
    prod = IntPoly([1])
    for p, m in squarefree_factors(f):
        prod = prod * p ** m
    # equal up to a rational constant
    assert to_sympy(prod).monic() == to_sympy(f).monic()


# ---------------------------------------------------------------- roots

@settings(max_examples=150)
@given(coeff_lists)
def test_real_root_count_matches_sympy(a):
    f = IntPoly(a)
    if f.is_zero():
        with pytest.raises(ZeroPolynomial):
            isolate_real_roots(f)
        return
    cert = isolate_real_roots(f)
    real = sympy.real_roots(to_sympy(f)) if f.degree > 0 else []
    assert cert.distinct_real_root_count == len(set(real))
    assert sum(cert.multiplicities) == len(real)
    assert cert.all_real == (len(real) == f.degree)
    assert cert.all_nonpositive == all(r <= 0 for r in real)
    # each interval holds exactly one distinct root of the square-free part
    seq = sturm_sequence(cert.square_free_part)
    for lo, hi in cert.isolating_intervals:
        assert count_roots(seq, lo, hi) == 1
    ivs = cert.isolating_intervals
    assert all(ivs[i][1] <= ivs[i + 1][0] for i in range(len(ivs) - 1))


def test_certify_examples():
    assert certify_real_rooted_nonpositive(IntPoly([1, 14, 1]))
    c = certify_real_rooted_nonpositive(IntPoly([1, 1, 1]))
    assert not c.all_real and not c
    assert certify_real_rooted_nonpositive(IntPoly([1, 1]))
    with pytest.raises(ZeroPolynomial):
        certify_real_rooted_nonpositive(IntPoly())


def test_isolate_examples():
    c = isolate_real_roots(IntPoly([-2, 0, 1]))
    assert c.distinct_real_root_count == 2 and c.multiplicities == (1, 1)
    (lo1, hi1), (lo2, hi2) = c.isolating_intervals
    assert lo1 < -Fraction(14142, 10000) <= hi1 and lo2 < Fraction(14142, 10000) <= hi2
    c = isolate_real_roots(IntPoly([1, 2, 1]))
    assert c.multiplicities == (2,)
    lo, hi = c.isolating_intervals[0]
    assert lo < -1 <= hi
    assert isolate_real_roots(IntPoly([5])).isolating_intervals == ()


def test_large_coefficients_exact():
    f = IntPoly([1, 28590, 1205199, 3724100, 1205199, 28590, 1])
    assert certify_real_rooted_nonpositive(f)
    big = IntPoly([1, 10**30 + 1, 10**30])  # roots -1 and -1e-30
    cert = certify_real_rooted_nonpositive(big)
    assert cert and cert.distinct_real_root_count == 2


# ---------------------------------------------------------------- palindromes and gamma

def test_gamma_examples():
    assert is_palindromic(IntPoly([1, 14, 1]), 2)
    assert is_palindromic(IntPoly([1, 1]), 1)
    assert not is_palindromic(IntPoly([3, 2, 1]), 2)
    assert gamma_extract(IntPoly([1, 14, 1]), 2) == IntPoly([1, 12])
    assert gamma_extract(IntPoly([1, 1]), 1) == IntPoly([1])
    assert gamma_extract(IntPoly([1, 2, 1]), 2) == IntPoly([1])
    assert gamma_expand(IntPoly([1, 12]), 2) == IntPoly([1, 14, 1])
    assert gamma_expand(IntPoly([1]), 0) == IntPoly([1])
    assert gamma_expand(IntPoly([1, 2]), 2) == IntPoly([1, 4, 1])
    with pytest.raises(NotPalindromic):
        gamma_extract(IntPoly([3, 2, 1]), 2)
    with pytest.raises(DegreeTooHigh):
        gamma_expand(IntPoly([1, 1, 1]), 3)


@given(st.integers(0, 9).flatmap(lambda d: st.tuples(st.just(d), st.lists(st.integers(-50, 50), max_size=d // 2 + 1))))
def test_gamma_round_trip(data):
    d, g = data
    g = IntPoly(g)
    f = gamma_expand(g, d)
    assert is_palindromic(f, d)
    assert gamma_extract(f, d) == g


def test_gamma_real_rootedness_equivalence_seeded():
    rng = random.Random(7)
    for _ in range(200):
        f, d = IntPoly([1]), 0
        for _ in range(rng.randint(1, 4)):
            r = rng.random()
            if r < 0.3:
                f, d = f * IntPoly([1, 1]), d + 1
            elif r < 0.75:
                a = rng.randint(0, 5)
                f, d = f * IntPoly([a, a * a + 1, a]), d + 2
            else:
                b = rng.randint(0, 4)
                f, d = f * IntPoly([1, b, 1]), d + 2
        g = gamma_extract(f, d)
        assert bool(certify_real_rooted_nonpositive(f)) == bool(certify_real_rooted_nonpositive(g))


# ---------------------------------------------------------------- interlacing

def test_interlacing_examples():
    assert certify_interlacing(IntPoly([1, 1]), IntPoly([1, 4, 1]))
    f = IntPoly([1, 4, 1])
    assert certify_interlacing(f, f)
    assert certify_interlacing(IntPoly([1]), IntPoly([1, 1]))
    assert certify_interlacing(IntPoly(), f) and certify_interlacing(f, IntPoly())
    # the root of x + 10 lies left of both roots of x^2 + 4x + 1
    assert not certify_interlacing(IntPoly([10, 1]), f)
    # two-sided alternation fails for roots placed on one side
    assert not certify_interlacing(IntPoly([1, 4, 1]), IntPoly([1, 1]))


def test_interlacing_errors():
    with pytest.raises(NotRealRooted):
        certify_interlacing(IntPoly([1, 1, 1]), IntPoly([1, 4, 1]))
    with pytest.raises(DegreeGap):
        certify_interlacing(IntPoly([1, 4, 1]), IntPoly([1, 4, 6, 4, 1]))


def test_constant_interlaces_only_low_degree():
    # directed relation: a constant sits below g only when g has at most one root
    assert certify_interlacing(IntPoly([3]), IntPoly([1, 2]))
    assert not certify_interlacing(IntPoly([3]), IntPoly([1, 4, 1]))
    assert zeros_interlace(IntPoly([3]), IntPoly([1, 4, 1])) is False
    assert zeros_interlace(IntPoly([1, 1]), IntPoly([1, 4, 1]))


@settings(max_examples=200)
@given(rational_rooted(4), rational_rooted(5))
def test_interlacing_matches_root_oracle(fa, ga):
    (f, fr), (g, gr) = fa, ga
    if f.degree < 1 or g.degree not in (f.degree, f.degree + 1):
        return
    assert certify_interlacing(f, g) == interlace_from_roots(fr, gr)


@settings(max_examples=100)
@given(rational_rooted(4))
def test_shared_roots_are_exact(fa):
    f, roots = fa
    if f.degree < 1:
        return
    g = f * IntPoly([1, 1])  # adds root -1, possibly doubling an existing one
    assert certify_interlacing(f, g) == interlace_from_roots(roots, roots + [Fraction(-1)])


def test_wronskian_examples():
    f, g = IntPoly([1, 4, 1]), IntPoly([1, 1])
    assert wronskian(f, g) == IntPoly([3, 2, 1])
    assert wronskian_nonneg(f, g)
    assert wronskian_nonneg(f, f)
    assert not wronskian_nonneg(g, f)


@settings(max_examples=100)
@given(rational_rooted(4), rational_rooted(5))
def test_interlacing_implies_wronskian(fa, ga):
    f, g = fa[0], ga[0]
    if f.degree < 1 or g.degree < 1 or abs(f.degree - g.degree) > 1:
        return
    if f.lead < 0:
        f = -f
    if g.lead < 0:
        g = -g
    if certify_interlacing(f, g):
        assert wronskian_nonneg(g, f)


def test_obreschkoff_sampling_seeded():
    rng = random.Random(99)
    pairs = [
        (IntPoly([1, 1]), IntPoly([1, 4, 1])),
        (IntPoly([1, 12]), IntPoly([1, 13])),
        (IntPoly([1, 14, 1]), IntPoly([1, 15, 15, 1])),
    ]
    for f, g in pairs:
        assert certify_interlacing(f, g)
        for _ in range(100):
            a, b = rng.randint(1, 10), rng.randint(1, 10)
            assert certify_real_rooted_nonpositive(f * a + g * b).all_real
