"""Lattice operations, modular elements and supersolvable labelings."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidChain, NotALattice, NotRankUniform, NotSupersolvable
from .labeling import EdgeLabeling, attach_labeling, is_umel, local_stats, verify_el
from .poset import GradedPoset, is_rank_uniform


class LatticeOps:
    """Joins and meets from up/down-set bitsets, cached per pair."""

    def __init__(self, P: GradedPoset):
        self.P = P
        self._join = {}
        self._meet = {}
        self.validated = False

    def join(self, a: int, b: int) -> int:
        if a == b:
            return a
        key = (a, b) if a < b else (b, a)
        j = self._join.get(key)
        if j is None:
            P = self.P
            common = P.up_bits[a] & P.up_bits[b]
            # positions are sorted by rank, so the lowest bit has minimal rank
            j = P.order[(common & -common).bit_length() - 1]
            if P.up_bits[j] != common:
                raise NotALattice(
                    f"{P.name(a)} and {P.name(b)} have no least upper bound",
                    witness={"pair": [a, b], "names": [P.name(a), P.name(b)]},
                )
            self._join[key] = j
        return j

    def meet(self, a: int, b: int) -> int:
        if a == b:
            return a
        key = (a, b) if a < b else (b, a)
        m = self._meet.get(key)
        if m is None:
            P = self.P
            common = P.down_bits[a] & P.down_bits[b]
            m = P.order[common.bit_length() - 1]
            if P.down_bits[m] != common:
                raise NotALattice(
                    f"{P.name(a)} and {P.name(b)} have no greatest lower bound",
                    witness={"pair": [a, b], "names": [P.name(a), P.name(b)]},
                )
            self._meet[key] = m
        return m

    def validate(self):
        """Compute the full join table; meets of a finite bounded poset then exist too."""
        if not self.validated:
            n = self.P.count
            for a in range(n):
                for b in range(a + 1, n):
                    self.join(a, b)
            self.validated = True
        return self


def lattice_ops(P: GradedPoset) -> LatticeOps:
    ops = P._memo.get("lattice")
    if ops is None:
        ops = P._memo["lattice"] = LatticeOps(P)
    return ops


def is_lattice(P: GradedPoset) -> bool:
    try:
        lattice_ops(P).validate()
        return True
    except NotALattice:
        return False


@dataclass(frozen=True)
class Modularity:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def _pair_failure(L: LatticeOps, a: int, b: int):
    """First u <= b with u v (a ^ b) != (u v a) ^ b, or None."""
    P = L.P
    ab = L.meet(a, b)
    for u in P.down_set(b):
        if L.join(u, ab) != L.meet(L.join(u, a), b):
            return u
    return None


def is_modular_element(P: GradedPoset, s: int) -> Modularity:
    memo = P._memo.setdefault("modular", {})
    if s in memo:
        return memo[s]
    L = lattice_ops(P).validate()
    result = Modularity(True)
    for t in range(P.count):
        for a, b in ((s, t), (t, s)):
            u = _pair_failure(L, a, b)
            if u is not None:
                result = Modularity(False, {
                    "element": s,
                    "other": t,
                    "u": u,
                    "pair": [a, b],
                    "names": [P.name(s), P.name(t), P.name(u)],
                })
                break
        if not result.ok:
            break
    memo[s] = result
    return result


@dataclass(frozen=True)
class ModularChain:
    elements: tuple

    def __len__(self):
        return len(self.elements)


def modular_maximal_chain(P: GradedPoset) -> ModularChain | None:
    lattice_ops(P).validate()
    dead = set()

    def dfs(e, path):
        if e == P.top:
            return list(path)
        for t in P.up[e]:
            if t in dead or not is_modular_element(P, t):
                continue
            path.append(t)
            got = dfs(t, path)
            if got:
                return got
            path.pop()
            dead.add(t)
        return None

    got = dfs(P.bottom, [P.bottom])
    return ModularChain(tuple(got)) if got else None


def mcnamara_labeling(P: GradedPoset, chain, verify: bool = True) -> EdgeLabeling:
    """lambda(s, t) = min{i : s v m_i >= t} for the maximal chain m_0 < ... < m_n."""
    m = tuple(chain.elements if isinstance(chain, ModularChain) else chain)
    if len(m) != P.n + 1 or m[0] != P.bottom or m[-1] != P.top:
        raise InvalidChain("chain must run from bottom to top through every rank", witness=list(m))
    for a, b in zip(m, m[1:]):
        if b not in P.up[a]:
            raise InvalidChain(f"{P.name(a)} is not covered by {P.name(b)}", witness=[a, b])
    L = lattice_ops(P)
    triples = []
    for s, t in P.covers:
        for i in range(1, len(m)):
            if P.le(t, L.join(s, m[i])):
                triples.append((s, t, i))
                break
    lab = attach_labeling(P, triples)
    if verify:
        el = verify_el(P, lab)
        if not el:
            raise InvalidChain("chain does not induce an EL-labeling", witness=el.witness)
    return lab


@dataclass(frozen=True)
class SupersolvableReport:
    chain: tuple
    umel: dict
    des_is_index_minus_one: bool
    witness: dict | None = None

    def as_dict(self) -> dict:
        return {
            "chain": list(self.chain),
            "umel": self.umel,
            "des_is_index_minus_one": self.des_is_index_minus_one,
            "witness": self.witness,
        }


def umel_from_supersolvable(P: GradedPoset):
    uni = is_rank_uniform(P)
    if not uni:
        raise NotRankUniform("lattice is not rank-uniform", witness=uni.witness)
    chain = modular_maximal_chain(P)
    if chain is None:
        witness = {"reason": "modular elements do not form a maximal chain"}
        for r in range(1, P.n):
            if not any(is_modular_element(P, e) for e in P.levels[r]):
                e = P.levels[r][0]
                witness = {"rank": r, "reason": "no modular element of this rank",
                           "example": P.name(e), "failure": is_modular_element(P, e).witness}
                break
        raise NotSupersolvable("no maximal chain of modular elements", witness=witness)
    lab = mcnamara_labeling(P, chain)
    report = is_umel(P, lab)
    witness = None
    for s in range(P.count):
        if s == P.top:
            continue
        st = local_stats(P, lab, s)
        bad = [t for t in P.up[s] if st.des[t] != st.index[t] - 1]
        if bad:
            witness = {"cover": [s, bad[0]], "ind": st.index[bad[0]], "des": st.des[bad[0]]}
            break
    return lab, SupersolvableReport(chain.elements, report.as_dict(), witness is None, witness)
