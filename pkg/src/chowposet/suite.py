"""Verification battery behind `chowposet verify`.

Every check yields (name, passed, witness); the witness is None on success
and a JSON-ready payload otherwise.  Checks are sorted by name before
reporting so that reports are byte-identical across runs.
"""
from __future__ import annotations

import json
import random
from importlib import resources
from itertools import combinations

from . import families as fam
from .chow import (
    aug_chow_poly,
    chow_poly,
    chow_all_methods,
    descent_set_counts,
    duality_identities,
    gamma_of,
    gamma_refined,
    h_interlacing_grid,
    h_refined,
    interlacing_battery,
    interlacing_grid,
    real_rootedness_report,
    rank_selected_gamma,
    tn_check,
)
from .errors import ChowPosetError, NotSupersolvable
from .labeling import attach_labeling, is_umel, rank_stats, verify_el
from .lattice import umel_from_supersolvable
from .poly import (
    IntPoly,
    certify_interlacing,
    certify_real_rooted_nonpositive,
    gamma_expand,
    gamma_extract,
)
from .poset import build_poset, flag_alpha, flag_beta, is_rank_uniform, rank_select

DEFAULT_SEED = 20240917
TYPE_B_QUICK = (3, 4, 5, 6)
TYPE_B_FULL = (3, 4, 5, 6, 7)


def load_golden(path=None) -> dict:
    """Type-B golden Chow coefficients keyed by n."""
    if path is None:
        text = resources.files("chowposet").joinpath("data/type_b_golden.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    return {int(k): [int(c) for c in v] for k, v in doc["chow"].items()}


def coefficient_diff(expected, got) -> list:
    width = max(len(expected), len(got))
    pad = lambda v: list(v) + [0] * (width - len(v))
    e, g = pad(expected), pad(got)
    return [{"index": i, "expected": a, "got": b} for i, (a, b) in enumerate(zip(e, g)) if a != b]


DIAMOND_NAMES = ["A", "B", "C", "D", "E", "F", "G"]
DIAMOND_LABELS = [(0, 1, 1), (0, 2, 2), (1, 3, 1), (1, 4, 2), (2, 4, 1), (2, 5, 2),
                  (3, 6, 1), (4, 6, 1), (5, 6, 1)]


def diamond():
    """Seven-element labeled poset with rank profile (1,2,3,1): two overlapping diamonds."""
    P = build_poset([(s, t) for s, t, _ in DIAMOND_LABELS], 7, DIAMOND_NAMES)
    return P, attach_labeling(P, DIAMOND_LABELS)


def perturbed_diamond():
    """Labels above C swapped: [A,E] then has two weakly increasing chains."""
    P, _ = diamond()
    swapped = {(2, 4): 2, (2, 5): 1}
    return P, attach_labeling(P, [(s, t, swapped.get((s, t), l)) for s, t, l in DIAMOND_LABELS])


# ---------------------------------------------------------------- instance sets

def family_instances(level: str):
    """(tag, constructor) pairs; the full level is the acceptance family set."""
    if level == "quick":
        builders = (
            [(f"boolean({n})", lambda n=n: fam.boolean(n)) for n in range(1, 5)]
            + [(f"uniform({k},{n})", lambda k=k, n=n: fam.uniform(k, n))
               for n in range(1, 6) for k in range(1, n + 1)]
            + [(f"partition({n})", lambda n=n: fam.partition(n)) for n in range(2, 5)]
            + [(f"dowling({n},{m})", lambda n=n, m=m: fam.dowling(n, m))
               for n in range(1, 4) for m in range(1, 3)]
            + [("projective(3,2)", lambda: fam.projective(3, 2))]
        )
    else:
        builders = (
            [(f"boolean({n})", lambda n=n: fam.boolean(n)) for n in range(1, 7)]
            + [(f"uniform({k},{n})", lambda k=k, n=n: fam.uniform(k, n))
               for n in range(1, 9) for k in range(1, n + 1)]
            + [(f"partition({n})", lambda n=n: fam.partition(n)) for n in range(2, 7)]
            + [(f"dowling({n},{m})", lambda n=n, m=m: fam.dowling(n, m))
               for n in range(1, 5) for m in range(1, 4)]
            + [(f"projective({n},2)", lambda n=n: fam.projective(n, 2)) for n in range(1, 5)]
            + [(f"projective({n},3)", lambda n=n: fam.projective(n, 3)) for n in range(1, 4)]
        )
    return builders


def random_instances(seed: int, count: int):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        rank = rng.randint(1, 5)
        out.append((f"random[{i}]", fam.random_graded(rng, rank, max_width=4, density=0.4)))
    return out


# ---------------------------------------------------------------- individual checks

def _coeffs(p: IntPoly) -> list:
    return list(p.coeffs)


def check_golden(n: int, golden: dict):
    P, _ = fam.dowling(n, 2)
    got = chow_all_methods(P, augmented=False, recursion_limit=0)["flag"]
    want = golden.get(n)
    if want is None:
        return False, {"reason": f"no golden row for n={n}"}
    if _coeffs(got) == want:
        return True, None
    return False, {"n": n, "expected": want, "got": _coeffs(got), "diff": coefficient_diff(want, _coeffs(got))}


def check_methods(P):
    plain = chow_all_methods(P, augmented=False)
    aug = chow_all_methods(P, augmented=True)
    ok = len({v for v in plain.values()}) == 1 and len({v for v in aug.values()}) == 1
    if ok:
        return True, None
    return False, {
        "chow": {m: _coeffs(v) for m, v in plain.items()},
        "aug_chow": {m: _coeffs(v) for m, v in aug.items()},
    }


def check_duality(P):
    ids = duality_identities(P)
    if all(v[0] for v in ids.values()):
        return True, None
    return False, {k: {"lhs": _coeffs(l), "rhs": _coeffs(r)} for k, (ok, l, r) in ids.items() if not ok}


def check_report(rep):
    if rep.ok:
        return True, None
    return False, {"failures": [{"name": n, "detail": d} for n, _, d in rep.failures()]}


def check_refinements(P, lab):
    ge, gr = gamma_refined(P, lab, "enumerate"), gamma_refined(P, lab, "recurse")
    he, hr = h_refined(P, lab, "enumerate"), h_refined(P, lab, "recurse")
    same_h = [a.h for a in he] == [b.h for b in hr]
    if ge != gr or not same_h:
        return False, {"gamma": [ge.as_dict(), gr.as_dict()],
                       "h": [[list(map(_coeffs, a.h)) for a in refs] for refs in (he, hr)]}
    rep = interlacing_grid(ge)
    for name, ok, d in h_interlacing_grid(he).checks:
        rep.add(name, ok, d)
    return check_report(rep)


def check_alpha_beta(P):
    """beta from alpha by inclusion-exclusion, and alpha recovered by summing beta."""
    ranks = range(1, P.n)
    subsets = [S for k in range(P.n) for S in combinations(ranks, k)]
    for S in subsets:
        alt = sum((-1) ** (len(S) - len(T)) * flag_alpha(P, T)
                  for k in range(len(S) + 1) for T in combinations(S, k))
        if alt != flag_beta(P, S):
            return False, {"S": list(S), "inclusion_exclusion": alt, "beta": flag_beta(P, S)}
        back = sum(flag_beta(P, T) for k in range(len(S) + 1) for T in combinations(S, k))
        if back != flag_alpha(P, S):
            return False, {"S": list(S), "sum_beta": back, "alpha": flag_alpha(P, S)}
    return True, None


def check_descents_vs_beta(P, lab):
    counts = descent_set_counts(P, lab)
    ranks = range(1, P.n)
    for k in range(P.n):
        for S in combinations(ranks, k):
            a, b = counts.get(frozenset(S), 0), flag_beta(P, S)
            if a != b:
                return False, {"S": list(S), "descent_count": a, "beta": b}
    return True, None


def check_rank_selections(P, lab):
    bad = []
    for k in range(P.n):
        for S in combinations(range(1, P.n), k):
            Q = rank_select(P, S)
            rep = real_rootedness_report(Q)
            try:
                rank_selected_gamma(P, lab, S, check=True)
                agree = True
            except ChowPosetError as exc:
                agree = False
                bad.append({"S": list(S), "error": type(exc).__name__, "witness": exc.witness})
            if not rep.ok and agree:
                bad.append({"S": list(S), "failures": [n for n, _, _ in rep.failures()]})
    return (not bad), (bad or None)


def obreschkoff_pairs(level: str):
    """Certified interlacing pairs taken from the gamma batteries."""
    names = ["dowling(3,2)", "projective(3,2)", "boolean(4)", "uniform(3,5)"]
    if level == "full":
        names += ["dowling(4,2)", "partition(5)", "uniform(4,7)"]
    build = dict(family_instances("full"))
    pairs = []
    for tag in names:
        P, _ = build[tag]()
        pairs.append((f"{tag} gamma(chow)<=gamma(aug)", gamma_of(P, False), gamma_of(P, True)))
        pairs.append((f"{tag} chow<=aug", chow_poly(P, "flag"), aug_chow_poly(P, "flag")))
    return pairs


def check_obreschkoff(f, g, rng, samples=100):
    if not certify_interlacing(f, g):
        return False, {"reason": "pair does not interlace", "f": _coeffs(f), "g": _coeffs(g)}
    for _ in range(samples):
        a, b = rng.randint(1, 10), rng.randint(1, 10)
        h = f * a + g * b
        if not certify_real_rooted_nonpositive(h).all_real:
            return False, {"alpha": a, "beta": b, "combination": _coeffs(h)}
    return True, None


def random_palindromic(rng: random.Random) -> tuple[IntPoly, int]:
    """Product of palindromic factors: (x+1), (x+a)(ax+1) and x^2+bx+1 with small b."""
    f, d = IntPoly((1,)), 0
    for _ in range(rng.randint(1, 4)):
        kind = rng.random()
        if kind < 0.3:
            f, d = f * IntPoly((1, 1)), d + 1
        elif kind < 0.8:
            a = rng.randint(0, 6)
            f, d = f * IntPoly((a, a * a + 1, a)), d + 2
        else:
            b = rng.randint(0, 4)
            f, d = f * IntPoly((1, b, 1)), d + 2
    return f, d


def check_gamma_properties(seed: int, count: int = 200):
    """Round trip and 'f real-rooted iff gamma(f) real-rooted' on palindromic samples."""
    rng = random.Random(seed)
    for trial in range(count):
        f, d = random_palindromic(rng)
        g = gamma_extract(f, d)
        if gamma_expand(g, d) != f:
            return False, {"trial": trial, "f": _coeffs(f), "d": d, "gamma": _coeffs(g)}
        lhs = bool(certify_real_rooted_nonpositive(f))
        rhs = bool(certify_real_rooted_nonpositive(g)) if g else True
        if lhs != rhs:
            return False, {"trial": trial, "f": _coeffs(f), "gamma": _coeffs(g),
                           "f_real_rooted": lhs, "gamma_real_rooted": rhs}
    return True, None


def palindromic_of_degree(rng: random.Random, d: int) -> IntPoly:
    """Real-rooted palindromic polynomial of exact degree d."""
    quad = rng.randint(0, d // 2)
    f = IntPoly((1, 1)) ** (d - 2 * quad)
    for _ in range(quad):
        a = rng.randint(1, 6)
        f = f * IntPoly((a, a * a + 1, a))
    return f


def check_gamma_interlacing(seed: int, count: int = 200):
    """For palindromic f and g with deg g = deg f + 1: f <= g iff gamma(f) <= gamma(g)."""
    rng = random.Random(seed)
    seen = {True: 0, False: 0}
    for trial in range(count):
        d = rng.randint(1, 7)
        f = palindromic_of_degree(rng, d)
        g = f * IntPoly((1, 1)) if rng.random() < 0.3 else palindromic_of_degree(rng, d + 1)
        a = certify_interlacing(f, g)
        b = certify_interlacing(gamma_extract(f, d), gamma_extract(g, d + 1))
        if a != b:
            return False, {"trial": trial, "f": _coeffs(f), "g": _coeffs(g),
                           "f<=g": a, "gamma(f)<=gamma(g)": b}
        seen[a] += 1
    if not seen[True] or not seen[False]:
        return False, {"reason": "sample did not exercise both outcomes", "counts": seen}
    return True, None


def micro_examples():
    out = {}
    P, lab = diamond()
    st = rank_stats(P, lab)
    out["micro: diamond widths and descents"] = (
        st.widths == ((1, 1), (1, 1), (1,)) and st.des[:2] == ((0, 1), (0, 1)),
        {"widths": [list(w) for w in st.widths], "des": [list(d) for d in st.des]},
    )
    P, lab = fam.dowling(2, 2)
    st = rank_stats(P, lab)
    out["micro: dowling(2,2) rank-0 stats"] = (
        st.widths[0] == (1, 3) and st.des[0] == (0, 1),
        {"widths": list(st.widths[0]), "des": list(st.des[0])},
    )
    bad = []
    for n in range(2, 8):
        for k in range(2, n + 1):
            P, lab = fam.uniform(k, n)
            st = rank_stats(P, lab)
            # widths are claimed below rank k-1, descents below rank k-2
            for r in range(k - 1):
                w, d = st.widths[r], st.des[r]
                for i in range(1, n - k + 1):
                    if w[i - 1] != 1 or (r <= k - 3 and d[i - 1] != i - 1):
                        bad.append({"k": k, "n": n, "rank": r, "index": i,
                                    "width": w[i - 1], "des": d[i - 1]})
    out["micro: uniform matroid stats"] = (not bad, bad or None)
    return {k: (ok, None if ok else w) for k, (ok, w) in out.items()}


def negative_controls():
    out = {}
    P, _ = fam.flats_from_points(fam.near_pencil())
    uni = is_rank_uniform(P)
    two_atoms = (not uni) and uni.witness["rank"] == 1 and len(uni.witness["elements"]) == 2
    out["negative: near-pencil not rank-uniform"] = (two_atoms, None if two_atoms else {"result": uni.witness})
    P, _ = fam.uniform(3, 5)
    try:
        umel_from_supersolvable(P)
        out["negative: uniform(3,5) not supersolvable"] = (False, {"reason": "modular chain found"})
    except NotSupersolvable:
        out["negative: uniform(3,5) not supersolvable"] = (True, None)
    P, lab = perturbed_diamond()
    el = verify_el(P, lab)
    out["negative: perturbed diamond not EL"] = (not el, None if not el else {"reason": "labeling passed"})
    cert = certify_real_rooted_nonpositive(IntPoly((1, 1, 1)))
    out["negative: x^2+x+1 not real-rooted"] = (not cert, None if not cert else cert.as_dict())
    P, _ = fam.partition(4)
    tn = tn_check(P)
    out["negative: partition(4) fails tn_check"] = (not tn, None if not tn else {"matrix": tn.matrix})
    return out


# ---------------------------------------------------------------- driver

def run_suite(level: str = "quick", golden_path=None, seed: int = DEFAULT_SEED) -> dict:
    """name -> (passed, witness) for the whole battery at the given level."""
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    results = {}

    def record(name, fn, *args):
        try:
            ok, witness = fn(*args)
        except ChowPosetError as exc:
            ok, witness = False, {"error": type(exc).__name__, "message": str(exc), "witness": exc.witness}
        results[name] = (bool(ok), None if ok else witness)

    golden = load_golden(golden_path)
    for n in (TYPE_B_FULL if level == "full" else TYPE_B_QUICK):
        record(f"golden: dowling({n},2) chow", check_golden, n, golden)

    instances = [(tag, *build()) for tag, build in family_instances(level)]
    for tag, P in random_instances(seed, 50 if level == "full" else 10):
        instances.append((tag, P, None))
    for tag, P, lab in instances:
        record(f"methods: {tag}", check_methods, P)
        record(f"duality: {tag}", check_duality, P)
        if lab is None:
            continue
        if P.count <= 5000 and verify_el(P, lab):
            record(f"flag: {tag} alpha/beta", check_alpha_beta, P)
            record(f"flag: {tag} descents vs beta", check_descents_vs_beta, P, lab)
        if P.n >= 1 and is_umel(P, lab):
            record(f"realroot: {tag}", lambda P=P: check_report(real_rootedness_report(P)))
            record(f"battery: {tag}", lambda P=P, lab=lab: check_report(interlacing_battery(P, lab)))
            record(f"refinements: {tag}", check_refinements, P, lab)

    for tag, build in (("dowling(3,2)", lambda: fam.dowling(3, 2)), ("projective(3,2)", lambda: fam.projective(3, 2))):
        P, lab = build()
        record(f"rank selection: {tag}", check_rank_selections, P, lab)

    rng = random.Random(seed)
    for name, f, g in obreschkoff_pairs(level):
        record(f"obreschkoff: {name}", check_obreschkoff, f, g, rng)
    record("gamma: round trip and real-rootedness", check_gamma_properties, seed)
    record("gamma: interlacing equivalence", check_gamma_interlacing, seed + 1)

    for name, (ok, w) in {**micro_examples(), **negative_controls()}.items():
        results[name] = (bool(ok), w)
    return dict(sorted(results.items()))
