"""Benchmark posets with their standard edge labelings."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from .errors import InvalidPoset, SchemaError, SizeLimitExceeded, UnknownFamily
from .labeling import EdgeLabeling, attach_labeling
from .poset import GradedPoset, build_poset

DEFAULT_MAX_ELEMENTS = 500_000


def _fmt_set(s) -> str:
    return "{" + ",".join(map(str, sorted(s))) + "}"


def _assemble(keys, covers, labels, names):
    """keys/names in index order; covers and labels as index triples."""
    P = build_poset(covers, len(keys), names)
    return P, attach_labeling(P, labels)


def boolean(n: int):
    if n < 1:
        raise ValueError("boolean(n) needs n >= 1")
    masks = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m))
    idx = {m: i for i, m in enumerate(masks)}
    covers, labels = [], []
    for m in masks:
        for e in range(n):
            if not m >> e & 1:
                t = m | 1 << e
                covers.append((idx[m], idx[t]))
                labels.append((idx[m], idx[t], e + 1))
    names = [_fmt_set(e + 1 for e in range(n) if m >> e & 1) for m in masks]
    return _assemble(masks, covers, labels, names)


def uniform(k: int, n: int):
    """Flats of the uniform matroid: subsets of size < k, and the full set."""
    if not 1 <= k <= n:
        raise ValueError("uniform(k, n) needs 1 <= k <= n")
    ground = tuple(range(1, n + 1))
    flats = [frozenset(c) for r in range(k) for c in combinations(ground, r)]
    full = frozenset(ground)
    flats.append(full)
    idx = {f: i for i, f in enumerate(flats)}
    covers, labels = [], []
    for f in flats:
        if f == full:
            continue
        if len(f) < k - 1:
            ups = [f | {e} for e in ground if e not in f]
        else:
            ups = [full]
        for g in ups:
            covers.append((idx[f], idx[g]))
            labels.append((idx[f], idx[g], min(g - f)))
    names = [_fmt_set(f) for f in flats]
    return _assemble(flats, covers, labels, names)


# ---------------------------------------------------------------- Dowling

@dataclass(frozen=True)
class GPartition:
    """Canonical G-partition of {0} ∪ [n] for G = Z/m.

    nonzero_blocks holds blocks as tuples of (element, group label) sorted by
    element; the smallest element carries label 0, blocks sorted by minimum.
    """

    zero_block: tuple
    nonzero_blocks: tuple

    def name(self) -> str:
        parts = [",".join(map(str, self.zero_block))]
        for b in self.nonzero_blocks:
            parts.append(",".join(f"{e}" if g == 0 else f"{e}^{g}" for e, g in b))
        return "|".join(parts)


def _normalize_block(pairs, m):
    pairs = sorted(pairs)
    g0 = pairs[0][1]
    return tuple((e, (g - g0) % m) for e, g in pairs)


def _dowling_covers(p: GPartition, m: int):
    """(upper GPartition, label) for every cover above p."""
    blocks = p.nonzero_blocks
    out = []
    for i, b in enumerate(blocks):
        rest = blocks[:i] + blocks[i + 1:]
        zero = tuple(sorted(p.zero_block + tuple(e for e, _ in b)))
        out.append((GPartition(zero, rest), b[0][0]))
    for i, j in combinations(range(len(blocks)), 2):
        bi, bj = blocks[i], blocks[j]
        rest = [b for k, b in enumerate(blocks) if k != i and k != j]
        label = max(bi[0][0], bj[0][0])
        for h in range(m):
            merged = _normalize_block(bi + tuple((e, (g + h) % m) for e, g in bj), m)
            nb = tuple(sorted(rest + [merged]))
            out.append((GPartition(p.zero_block, nb), label))
    return out


def stirling2(n: int, k: int) -> int:
    row = [1] + [0] * k
    for i in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k] if n else int(k == 0)


def dowling_size(n: int, m: int) -> int:
    return sum(
        comb(n, j) * sum(stirling2(n - j, b) * m ** (n - j - b) for b in range(n - j + 1))
        for j in range(n + 1)
    )


def dowling(n: int, m: int, max_elements: int = DEFAULT_MAX_ELEMENTS):
    """Dowling geometry over Z/m with its signed-partition edge labeling."""
    if n < 1 or m < 1:
        raise ValueError("dowling(n, m) needs n, m >= 1")
    size = dowling_size(n, m)
    if size > max_elements:
        raise SizeLimitExceeded(f"dowling({n},{m}) has {size} elements > {max_elements}")
    bottom = GPartition((0,), tuple(((e, 0),) for e in range(1, n + 1)))
    idx = {bottom: 0}
    order = [bottom]
    covers, labels = [], []
    head = 0
    while head < len(order):
        p = order[head]
        s = head
        head += 1
        for q, lab in _dowling_covers(p, m):
            t = idx.get(q)
            if t is None:
                t = idx[q] = len(order)
                order.append(q)
            covers.append((s, t))
            labels.append((s, t, lab))
    assert len(order) == size, (len(order), size)
    return _assemble(order, covers, labels, [p.name() for p in order])


def partition(n: int):
    """Partition lattice of [n]; label of a merge is max(min B, min B') - 1."""
    if n < 2:
        raise ValueError("partition(n) needs n >= 2")
    bottom = tuple((e,) for e in range(1, n + 1))
    idx = {bottom: 0}
    order = [bottom]
    covers, labels = [], []
    head = 0
    while head < len(order):
        p = order[head]
        s = head
        head += 1
        for i, j in combinations(range(len(p)), 2):
            merged = tuple(sorted(p[i] + p[j]))
            q = tuple(sorted([b for k, b in enumerate(p) if k not in (i, j)] + [merged]))
            t = idx.get(q)
            if t is None:
                t = idx[q] = len(order)
                order.append(q)
            covers.append((s, t))
            labels.append((s, t, max(p[i][0], p[j][0]) - 1))
    names = ["|".join("".join(map(str, b)) if n < 10 else ",".join(map(str, b)) for b in p) for p in order]
    return _assemble(order, covers, labels, names)


# ---------------------------------------------------------------- linear algebra over F_q

def _check_prime(q: int):
    if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise ValueError(f"{q} is not prime")


def rref(rows, q: int) -> tuple:
    """Reduced row echelon form over F_q as a tuple of nonzero rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return ()
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % q), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], q - 2, q)
        rows[r] = [(v * inv) % q for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % q:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(v % q for v in row) for row in rows[:r])


def _in_span(basis: tuple, v, q: int) -> bool:
    return len(rref(list(basis) + [list(v)], q)) == len(basis)


def projective(n: int, q: int, max_elements: int = DEFAULT_MAX_ELEMENTS):
    """Subspace lattice of F_q^n with the labeling induced by the coordinate flag."""
    from .lattice import mcnamara_labeling

    _check_prime(q)
    if n < 1:
        raise ValueError("projective(n, q) needs n >= 1")
    size = sum(_gaussian(n, k, q) for k in range(n + 1))
    if size > max_elements:
        raise SizeLimitExceeded(f"projective({n},{q}) has {size} elements > {max_elements}")
    vectors = [v for v in product(range(q), repeat=n) if any(v)]
    zero = ()
    idx = {zero: 0}
    order = [zero]
    covers = []
    head = 0
    while head < len(order):
        U = order[head]
        s = head
        head += 1
        ups = set()
        for v in vectors:
            if U and _in_span(U, v, q):
                continue
            ups.add(rref(list(U) + [list(v)], q))
        for W in sorted(ups):
            t = idx.get(W)
            if t is None:
                t = idx[W] = len(order)
                order.append(W)
            covers.append((s, t))
    names = ["<" + ";".join("".join(map(str, r)) for r in U) + ">" for U in order]
    P = build_poset(covers, len(order), names)
    chain = [idx[rref([[int(i == j) for j in range(n)] for i in range(k)], q) if k else ()] for k in range(n + 1)]
    return P, mcnamara_labeling(P, chain)


def _gaussian(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ---------------------------------------------------------------- point configurations

@dataclass(frozen=True)
class PointConfig:
    q: int
    dimension: int
    points: tuple

    def __post_init__(self):
        _check_prime(self.q)
        pts = tuple(tuple(int(c) % self.q for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if len(p) != self.dimension:
                raise ValueError(f"point {p} has wrong dimension")
            if not any(p):
                raise ValueError("zero vector is a loop")
        for a, b in combinations(range(len(pts)), 2):
            if len(rref([pts[a], pts[b]], self.q)) < 2:
                raise ValueError(f"points {a + 1} and {b + 1} are parallel")


def flats_from_points(cfg: PointConfig, labeled: bool = True):
    """Lattice of flats of the vector configuration; labels are 1-based min new point."""
    q, pts = cfg.q, cfg.points

    def closure(idxs):
        basis = rref([pts[i] for i in idxs], q)
        if not basis:
            return frozenset()
        return frozenset(i for i in range(len(pts)) if i in idxs or _in_span(basis, pts[i], q))

    empty = frozenset()
    idx = {empty: 0}
    order = [empty]
    covers, labels = [], []
    head = 0
    while head < len(order):
        F = order[head]
        s = head
        head += 1
        seen = set()
        for p in range(len(pts)):
            if p in F:
                continue
            G = closure(F | {p})
            if G in seen:
                continue
            seen.add(G)
            t = idx.get(G)
            if t is None:
                t = idx[G] = len(order)
                order.append(G)
            covers.append((s, t))
            labels.append((s, t, min(G - F) + 1))
    names = [_fmt_set(i + 1 for i in F) for F in order]
    P = build_poset(covers, len(order), names)
    if not labeled:
        return P
    return P, attach_labeling(P, labels)


def near_pencil():
    """Four points over F_2 with exactly one three-point line."""
    return PointConfig(2, 3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)))


def affine_plane_2():
    return PointConfig(2, 3, tuple((x, y, 1) for x in range(2) for y in range(2)))


# ---------------------------------------------------------------- random posets

def random_graded(rng: random.Random, rank: int, max_width: int = 4, density: float = 0.5):
    """Random bounded graded poset of the given rank (no labeling)."""
    if rank < 1:
        return build_poset([], 1)
    widths = [1] + [rng.randint(1, max_width) for _ in range(rank - 1)] + [1]
    levels, start = [], 0
    for w in widths:
        levels.append(list(range(start, start + w)))
        start += w
    covers = set()
    for lo, hi in zip(levels, levels[1:]):
        for s in lo:
            covers.add((s, rng.choice(hi)))
        for t in hi:
            covers.add((rng.choice(lo), t))
        for s in lo:
            for t in hi:
                if rng.random() < density:
                    covers.add((s, t))
    return build_poset(sorted(covers), start)


# ---------------------------------------------------------------- dispatch

FAMILIES = {
    "boolean": (boolean, ("n",)),
    "uniform": (uniform, ("k", "n")),
    "partition": (partition, ("n",)),
    "dowling": (dowling, ("n", "m")),
    "projective": (projective, ("n", "q")),
    "near-pencil": (lambda: flats_from_points(near_pencil()), ()),
    "affine-plane": (lambda: flats_from_points(affine_plane_2()), ()),
}


def make_family(name: str, max_elements: int = DEFAULT_MAX_ELEMENTS, **params):
    """Construct a named family; returns (poset, labeling)."""
    if name not in FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    fn, keys = FAMILIES[name]
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise SchemaError(f"family {name} needs parameters {missing}")
    args = [params[k] for k in keys]
    if name in ("dowling", "projective"):
        return fn(*args, max_elements=max_elements)
    return fn(*args)


# ---------------------------------------------------------------- documents

def to_json(P: GradedPoset, lab: EdgeLabeling | None = None) -> dict:
    doc = {
        "elements": [P.name(e) for e in range(P.count)],
        "covers": [[s, t] for s, t in P.covers],
    }
    if lab is not None:
        doc["labels"] = [[s, t, lab(s, t)] for s, t in P.covers]
    return doc


def from_json(doc) -> tuple[GradedPoset, EdgeLabeling | None]:
    if not isinstance(doc, dict):
        raise SchemaError("poset document must be a JSON object")
    elements = doc.get("elements")
    covers = doc.get("covers")
    if not isinstance(elements, list) or not isinstance(covers, list):
        raise SchemaError("document needs 'elements' and 'covers' arrays")
    count = len(elements)

    def idx(v, what):
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < count:
            raise SchemaError(f"{what} refers to unknown element {v!r}")
        return v

    pairs = []
    for c in covers:
        if not isinstance(c, list) or len(c) != 2:
            raise SchemaError(f"cover {c!r} must be a pair")
        pairs.append((idx(c[0], "cover"), idx(c[1], "cover")))
    try:
        P = build_poset(pairs, count, [str(e) for e in elements])
    except InvalidPoset:
        raise
    lab = None
    if doc.get("labels") is not None:
        triples = []
        for c in doc["labels"]:
            if not isinstance(c, list) or len(c) != 3:
                raise SchemaError(f"label entry {c!r} must be a triple")
            if isinstance(c[2], bool) or not isinstance(c[2], int):
                raise SchemaError(f"label {c[2]!r} is not an integer")
            triples.append((idx(c[0], "label"), idx(c[1], "label"), c[2]))
        lab = attach_labeling(P, triples)
    return P, lab
