"""Acceptance criteria 1-9, one recorded PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in an
"acceptance criteria" section of the terminal summary.
"""
import json
import random
import time
from itertools import combinations

import pytest

from chowposet import families as fam
from chowposet.chow import (
    aug_chow_poly,
    chow_poly,
    gamma_of,
    gamma_refined,
    h_refined,
    interlacing_battery,
    interlacing_grid,
    h_interlacing_grid,
    tn_check,
)
from chowposet.cli import main
from chowposet.errors import NotSupersolvable
from chowposet.labeling import is_umel, rank_stats, verify_el
from chowposet.lattice import umel_from_supersolvable
from chowposet.poly import IntPoly, certify_real_rooted_nonpositive
from chowposet.poset import dual, is_rank_uniform, order_complex_polys, rank_select, truncate
from chowposet.suite import (
    DEFAULT_SEED,
    check_alpha_beta,
    check_descents_vs_beta,
    check_gamma_interlacing,
    check_gamma_properties,
    check_obreschkoff,
    diamond,
    family_instances,
    obreschkoff_pairs,
    perturbed_diamond,
    random_instances,
)

# coefficient lists, constant term first
TYPE_B_CHOW = {
    3: [1, 14, 1],
    4: [1, 99, 99, 1],
    5: [1, 622, 3162, 622, 1],
    6: [1, 4051, 65812, 65812, 4051, 1],
    7: [1, 28590, 1205199, 3724100, 1205199, 28590, 1],
}


@pytest.fixture(scope="module")
def instances():
    return [(tag, *build()) for tag, build in family_instances("full")]


@pytest.fixture(scope="module")
def umel_instances(instances):
    return [(tag, P, lab) for tag, P, lab in instances if is_umel(P, lab)]


def cli_chow(capsys, n):
    code = main(["compute", "chow", "--family", "dowling", "--n", str(n), "--m", "2"])
    rep = json.loads(capsys.readouterr().out)
    return code, [int(c) for c in rep["outputs"]["polynomial"]["coeffs"]]


# ---------------------------------------------------------------- 1

def test_criterion_1_type_b_golden(acceptance, capsys):
    bad = []
    for n in (3, 4, 5, 6):
        start = time.perf_counter()
        code, got = cli_chow(capsys, n)
        elapsed = time.perf_counter() - start
        if code != 0 or got != TYPE_B_CHOW[n] or elapsed >= 60:
            bad.append({"n": n, "got": got, "seconds": round(elapsed, 1)})
    assert acceptance("1 (type-B golden values, n=3..6)", not bad, bad or "")


@pytest.mark.slow
def test_criterion_1_type_b_golden_extended(acceptance, capsys):
    start = time.perf_counter()
    code, got = cli_chow(capsys, 7)
    elapsed = time.perf_counter() - start
    ok = code == 0 and got == TYPE_B_CHOW[7] and elapsed < 600
    assert acceptance("1 (type-B golden value, n=7 extended)", ok, f"{elapsed:.1f}s")


# ---------------------------------------------------------------- 2

def test_criterion_2_method_agreement(acceptance, instances):
    start = time.perf_counter()
    posets = [(tag, P) for tag, P, _ in instances] + random_instances(DEFAULT_SEED, 50)
    bad = []
    for tag, P in posets:
        plain = {m: chow_poly(P, m) for m in ("recursion", "flag")}
        aug = {m: aug_chow_poly(P, m) for m in ("sum", "adjoin", "flag")}
        if len(set(plain.values())) != 1 or len(set(aug.values())) != 1:
            bad.append(tag)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    assert acceptance("2 (method cross-validation)", ok, f"{len(posets)} posets, {elapsed:.1f}s" + (f", bad {bad}" if bad else ""))


# ---------------------------------------------------------------- 3

def test_criterion_3_duality(acceptance, instances):
    bad = []
    for tag, P, _ in instances:
        D = dual(P)
        if chow_poly(D, "flag") != aug_chow_poly(truncate(P, 1), "flag"):
            bad.append((tag, "chow of dual"))
        if aug_chow_poly(D, "flag") != aug_chow_poly(P, "flag"):
            bad.append((tag, "augmented chow of dual"))
    assert acceptance("3 (duality identities)", not bad, bad or f"{len(instances)} posets")


# ---------------------------------------------------------------- 4

def test_criterion_4_real_rootedness(acceptance, umel_instances):
    bad = []
    for tag, P, _ in umel_instances:
        for what, f in (("chow", chow_poly(P, "flag")), ("aug", aug_chow_poly(P, "flag")),
                        ("h", order_complex_polys(P)[1])):
            if not certify_real_rooted_nonpositive(f):
                bad.append((tag, what, list(f.coeffs)))
    selections = 0
    for build in (lambda: fam.dowling(3, 2), lambda: fam.projective(3, 2)):
        P, _ = build()
        for k in range(P.n):
            for S in combinations(range(1, P.n), k):
                Q = rank_select(P, S)
                selections += 1
                for what, f in (("chow", chow_poly(Q, "flag")), ("aug", aug_chow_poly(Q, "flag"))):
                    if not certify_real_rooted_nonpositive(f):
                        bad.append((S, what, list(f.coeffs)))
    assert acceptance("4 (real-rootedness)", not bad,
                      bad or f"{len(umel_instances)} UMEL posets, {selections} rank selections")


# ---------------------------------------------------------------- 5

def test_criterion_5_interlacing_battery(acceptance, umel_instances):
    bad, atomic = [], 0
    for tag, P, lab in umel_instances:
        rep = interlacing_battery(P, lab)
        if not rep:
            bad.append((tag, [n for n, _, _ in rep.failures()]))
            continue
        names = [n for n, _, _ in rep.checks]
        pre = [d for n, _, d in rep.checks if n.startswith("atomic precondition")]
        if pre and pre[0]["holds"] and P.n >= 2:
            atomic += 1
            if not any(n.startswith("gamma(chow[") for n in names):
                bad.append((tag, "atomic check missing"))
    ok = not bad and atomic > 0
    assert acceptance("5 (interlacing battery)", ok, bad or f"{len(umel_instances)} posets, atomic case on {atomic}")


# ---------------------------------------------------------------- 6

def test_criterion_6_refinements(acceptance, umel_instances):
    bad = []
    for tag, P, lab in umel_instances:
        if P.n < 1:
            continue
        ge, gr = gamma_refined(P, lab, "enumerate"), gamma_refined(P, lab, "recurse")
        he, hr = h_refined(P, lab, "enumerate"), h_refined(P, lab, "recurse")
        if ge != gr or [r.h for r in he] != [r.h for r in hr]:
            bad.append((tag, "methods differ"))
        elif not interlacing_grid(ge) or not h_interlacing_grid(he):
            bad.append((tag, "interlacing grid"))
    assert acceptance("6 (refinement recursions)", not bad, bad or f"{len(umel_instances)} posets")


# ---------------------------------------------------------------- 7

def test_criterion_7_micro_examples(acceptance):
    bad = []
    P, lab = diamond()
    st = rank_stats(P, lab)
    if st.widths[:2] != ((1, 1), (1, 1)) or st.des[:2] != ((0, 1), (0, 1)):
        bad.append("diamond")
    P, lab = fam.dowling(2, 2)
    st = rank_stats(P, lab)
    if st.widths[0] != (1, 3) or st.des[0] != (0, 1):
        bad.append("dowling(2,2)")
    for n in range(2, 8):
        for k in range(2, n + 1):
            P, lab = fam.uniform(k, n)
            st = rank_stats(P, lab)
            for r in range(k - 1):
                for i in range(1, n - k + 1):
                    if st.widths[r][i - 1] != 1 or (r <= k - 3 and st.des[r][i - 1] != i - 1):
                        bad.append(f"uniform({k},{n}) rank {r} index {i}")
    assert acceptance("7 (micro-examples)", not bad, bad or "")


# ---------------------------------------------------------------- 8

def test_criterion_8_negative_controls(acceptance):
    bad = []
    P, _ = fam.flats_from_points(fam.near_pencil())
    res = is_rank_uniform(P)
    if res or len(res.witness["elements"]) != 2 or res.witness["rank"] != 1:
        bad.append("near-pencil")
    try:
        umel_from_supersolvable(fam.uniform(3, 5)[0])
        bad.append("uniform(3,5)")
    except NotSupersolvable:
        pass
    if verify_el(*perturbed_diamond()):
        bad.append("perturbed diamond")
    if certify_real_rooted_nonpositive(IntPoly([1, 1, 1])):
        bad.append("x^2+x+1")
    if tn_check(fam.partition(4)[0]):
        bad.append("partition(4)")
    assert acceptance("8 (negative controls)", not bad, bad or "")


# ---------------------------------------------------------------- 9

def test_criterion_9_property_suites(acceptance, instances):
    bad = []
    labeled = [(t, P, lab) for t, P, lab in instances if P.count <= 5000 and verify_el(P, lab)]
    for tag, P, lab in labeled:
        if not check_alpha_beta(P)[0]:
            bad.append((tag, "alpha/beta"))
        if not check_descents_vs_beta(P, lab)[0]:
            bad.append((tag, "descents vs beta"))
    rng = random.Random(DEFAULT_SEED)
    pairs = obreschkoff_pairs("full")
    for name, f, g in pairs:
        if not check_obreschkoff(f, g, rng)[0]:
            bad.append(name)
    if not check_gamma_properties(DEFAULT_SEED)[0]:
        bad.append("gamma round trip")
    if not check_gamma_interlacing(DEFAULT_SEED + 1)[0]:
        bad.append("gamma interlacing equivalence")
    assert acceptance("9 (property suites)", not bad,
                      bad or f"{len(labeled)} EL posets, {len(pairs)} Obreschkoff pairs")
