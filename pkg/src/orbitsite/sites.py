"""Sieves, finite Grothendieck topologies and the sheaf condition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import guards
from .abelian import AbGroup, SubquotientGroup, _cols
from .errors import ApexMismatch, GuardExceeded, MixedCodomain
from .fincat import FinCat, FinFunctor, comma_category, is_filtered
from .linalg import QuotientModule, _to_dict, obj_matrix
from .presheaves import AbPresheaf, SetPresheaf


@dataclass(frozen=True)
class Sieve:
    apex: int
    members: frozenset

    def component(self, C: FinCat, y: int) -> list[int]:
        return sorted(f for f in self.members if int(C.dom[f]) == y)

    def __len__(self):
        return len(self.members)

    def __contains__(self, f):
        return f in self.members

    def __le__(self, other: "Sieve") -> bool:
        return self.apex == other.apex and self.members <= other.members

    def is_maximal(self, C: FinCat) -> bool:
        return int(C.identities[self.apex]) in self.members

    def to_dict(self, C: FinCat) -> dict:
        comps: dict = {}
        for f in sorted(self.members):
            comps.setdefault(int(C.dom[f]), []).append(int(f))
        return {"apex": self.apex, "members": [[y, fs] for y, fs in sorted(comps.items())]}

    @classmethod
    def from_dict(cls, d: dict) -> "Sieve":
        return cls(int(d["apex"]), frozenset(int(f) for _, fs in d["members"] for f in fs))


def generate_sieve(C: FinCat, morphisms: Iterable[int], apex: int | None = None) -> Sieve:
    """Smallest sieve containing the given morphisms (all with codomain ``apex``)."""
    ms = [int(u) for u in morphisms]
    cods = {int(C.cod[u]) for u in ms}
    if len(cods) > 1 or (apex is not None and cods and cods != {apex}):
        raise MixedCodomain(f"morphisms have codomains {sorted(cods)}")
    if apex is None:
        if not ms:
            raise MixedCodomain("empty generating set needs an explicit apex")
        apex = cods.pop()
    out = set()
    for u in ms:
        for v in C.into(int(C.dom[u])):
            out.add(int(C.table[u, v]))
    return Sieve(int(apex), frozenset(out))


def maximal_sieve(C: FinCat, x: int) -> Sieve:
    return Sieve(x, frozenset(C.into(x)))


def pullback_sieve(C: FinCat, u: int, S: Sieve) -> Sieve:
    """u*(S) = {v : u o v in S} on dom(u)."""
    if int(C.cod[u]) != S.apex:
        raise ApexMismatch(f"morphism {u} does not land in the apex {S.apex}")
    y = int(C.dom[u])
    return Sieve(y, frozenset(int(v) for v in C.into(y) if int(C.table[u, v]) in S.members))


class FiniteTopology:
    """A topology on a finite category, stored by its minimal covering sieves."""

    def __init__(self, base: FinCat, min_sieves: list[Sieve], name: str = ""):
        self.base = base
        self.min_sieves = list(min_sieves)
        self.name = name
        if len(self.min_sieves) != base.nobj:
            raise ValueError("one minimal sieve per object is required")

    def min_sieve(self, x: int) -> Sieve:
        return self.min_sieves[x]

    def is_covering(self, S: Sieve) -> bool:
        return self.min_sieves[S.apex].members <= S.members

    def basis(self) -> list[Sieve]:
        """Minimal sieves and all their pullbacks (deduplicated)."""
        C = self.base
        seen = {}
        for x in reversed(range(C.nobj)):
            seen[self.min_sieves[x]] = None
        for x in range(C.nobj):
            S = self.min_sieves[x]
            for u in C.into(x):
                seen[pullback_sieve(C, u, S)] = None
        return list(seen)

    def to_dict(self) -> dict:
        return {"name": self.name, "min_sieves": [S.to_dict(self.base) for S in self.min_sieves]}

    @classmethod
    def from_dict(cls, C: FinCat, d: dict) -> "FiniteTopology":
        return cls(C, [Sieve.from_dict(s) for s in d["min_sieves"]], d.get("name", ""))


def minimal_topology(C: FinCat) -> FiniteTopology:
    return FiniteTopology(C, [maximal_sieve(C, x) for x in range(C.nobj)], "minimal")


def maximal_topology(C: FinCat) -> FiniteTopology:
    return FiniteTopology(C, [Sieve(x, frozenset()) for x in range(C.nobj)], "maximal")


def subcategory_topology(C: FinCat, D: Iterable[int], name: str = "") -> FiniteTopology:
    """J^D: the minimal sieve on x is the set of morphisms into x factoring through a D-object."""
    Dset = set(int(d) for d in D)
    sieves = []
    for x in range(C.nobj):
        gens = [f for f in C.into(x) if int(C.dom[f]) in Dset]
        sieves.append(generate_sieve(C, gens, apex=x))
    return FiniteTopology(C, sieves, name or "subcategory")


def subcategory_covers_literal(C: FinCat, D: Iterable[int], S: Sieve) -> bool:
    """Literal subcategory condition: S(w) -> Hom(w, x) is onto for every w in D."""
    return all(set(C.hom(w, S.apex)) <= S.members for w in D)


def sipp_topology(O, p: int | None = None) -> FiniteTopology:
    """The sipp topology on an orbit category O(G): J^D for D the p-subgroup objects."""
    from .errors import OrbitSiteError
    from .groups import is_p_group

    p = O.p if p is None else p
    if p is None:
        raise OrbitSiteError("sipp topology needs a prime p")
    D = [x for x, H in enumerate(O.object_subgroup) if is_p_group(H, p)]
    return subcategory_topology(O, D, "sipp")


# --- exhaustive enumeration ----------------------------------------------

def all_sieves(C: FinCat, x: int, limit: int | None = None) -> list[Sieve]:
    """Every sieve on x (unions of principal sieves), guarded by ``max_sieves``."""
    limit = guards.get().max_sieves if limit is None else limit
    principal = {f: generate_sieve(C, [f]).members for f in C.into(x)}
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for S in frontier:
            for f, P in principal.items():
                if f in S:
                    continue
                T = S | P
                if T not in found:
                    found.add(T)
                    nxt.append(T)
                    if len(found) > limit:
                        raise GuardExceeded(f"more than {limit} sieves on object {x}")
        frontier = nxt
    return [Sieve(x, S) for S in sorted(found, key=lambda s: (len(s), sorted(s)))]


def topology_axioms_check(T: FiniteTopology) -> dict:
    """Check the three topology axioms for J(x) = {S containing min_sieve(x)}.

    Falls back to the pullback stability of minimal sieves when the sieve
    enumeration exceeds the guard (``status == "partial"``).
    """
    C = T.base
    for x in range(C.nobj):
        if not T.min_sieves[x].members <= set(C.into(x)) or any(int(C.cod[f]) != x for f in T.min_sieves[x].members):
            return {"ok": False, "status": "full", "axiom": 0, "object": x}
        S = T.min_sieves[x]
        closed = generate_sieve(C, S.members, apex=x)
        if closed.members != S.members:
            return {"ok": False, "status": "full", "axiom": 0, "object": x, "reason": "not a sieve"}
    stab = _pullback_stability(T)
    try:
        sieves = [all_sieves(C, x) for x in range(C.nobj)]
    except GuardExceeded:
        if stab is not None:
            return {"ok": False, "status": "partial", "axiom": 2, **stab}
        return {"ok": True, "status": "partial"}
    for x in range(C.nobj):
        covering = [S for S in sieves[x] if T.is_covering(S)]
        # (1) the maximal sieve covers
        if not T.is_covering(maximal_sieve(C, x)):
            return {"ok": False, "status": "full", "axiom": 1, "object": x}
        # (2) stability under pullback
        for S in covering:
            for u in C.into(x):
                if not T.is_covering(pullback_sieve(C, u, S)):
                    return {"ok": False, "status": "full", "axiom": 2, "object": x, "sieve": sorted(S.members), "morphism": u}
        # (3) transitivity
        for R in sieves[x]:
            if T.is_covering(R):
                continue
            for S in covering:
                if all(T.is_covering(pullback_sieve(C, u, R)) for u in S.members):
                    return {"ok": False, "status": "full", "axiom": 3, "object": x, "sieve": sorted(R.members)}
    return {"ok": True, "status": "full"}


def _pullback_stability(T: FiniteTopology):
    C = T.base
    for x in range(C.nobj):
        for u in C.into(x):
            y = int(C.dom[u])
            if not T.min_sieves[y].members <= pullback_sieve(C, u, T.min_sieves[x]).members:
                return {"object": x, "morphism": int(u)}
    return None


# --- matching families ---------------------------------------------------

def matching_families(F: SetPresheaf, S: Sieve) -> list[dict]:
    """All families (a_f)_{f in S} with F(v)(a_f) = a_{f o v}."""
    C = F.base
    members = sorted(S.members)
    out: list[dict] = []

    def assign(fam: dict, f: int, a: int) -> dict | None:
        fam = dict(fam)
        if fam.get(f, a) != a:
            return None
        fam[f] = a
        for v in C.into(int(C.dom[f])):
            g = int(C.table[f, v])
            b = int(F.maps[v][a])
            if fam.get(g, b) != b:
                return None
            fam[g] = b
        return fam

    def rec(fam: dict):
        for f in members:
            if f not in fam:
                for a in range(F.sizes[int(C.dom[f])]):
                    nf = assign(fam, f, a)
                    if nf is not None:
                        rec(nf)
                return
        out.append(fam)

    rec({})
    return out


class NatGroup:
    """Nat(S, M) for an abelian presheaf M, as the kernel of the matching-condition map."""

    def __init__(self, M: AbPresheaf, S: Sieve):
        C = M.base
        self.M, self.S = M, S
        self.members = sorted(S.members)
        self.offsets = {}
        off = 0
        for f in self.members:
            self.offsets[f] = off
            off += M.values[int(C.dom[f])].ngens
        self.n = off
        rels = []
        for f in self.members:
            R = M.values[int(C.dom[f])].relations
            o = self.offsets[f]
            for j in range(R.shape[1]):
                rels.append({o + i: int(R[i, j]) for i in range(R.shape[0]) if R[i, j]})
        self.P = QuotientModule(off, rels)
        # constraint rows: for (f, v) with v non-identity: M(v) a_f - a_{f o v}
        cols: list[dict] = [dict() for _ in range(off)]
        trel: list[dict] = []
        row = 0
        for f in self.members:
            for v in C.into(int(C.dom[f])):
                if C.is_identity[v]:
                    continue
                g = int(C.table[f, v])
                tgt = M.values[int(C.dom[v])]
                Mv = M.maps[v]
                of, og = self.offsets[f], self.offsets[g]
                for i in range(tgt.ngens):
                    for j in range(Mv.shape[1]):
                        if Mv[i, j]:
                            cols[of + j][row + i] = cols[of + j].get(row + i, 0) + int(Mv[i, j])
                    cols[og + i][row + i] = cols[og + i].get(row + i, 0) - 1
                R = tgt.relations
                for j in range(R.shape[1]):
                    trel.append({row + i: int(R[i, j]) for i in range(R.shape[0]) if R[i, j]})
                row += tgt.ngens
        for c in cols:
            for k in [k for k, v in c.items() if v == 0]:
                del c[k]
        self.K = SubquotientGroup(self.P, cols, trel)

    @property
    def invariants(self) -> list[int]:
        return self.K.invariants

    def restriction_vector(self, s) -> list[int]:
        """Image of a section s of M(apex) as a family."""
        C = self.M.base
        out = [0] * self.n
        for f in self.members:
            v = self.M.maps[f].dot(np.asarray(s, dtype=object)) if len(s) else []
            o = self.offsets[f]
            for i, x in enumerate(v):
                out[o + i] = int(x)
        return out

    def coords(self, fam) -> list[int]:
        return self.K.coords(fam)

    def representatives(self) -> list[list[int]]:
        return self.K.representatives()

    def component(self, fam, f: int) -> list[int]:
        o = self.offsets[f]
        n = self.M.values[int(self.M.base.dom[f])].ngens
        return list(fam[o : o + n])


@dataclass
class SheafReport:
    ok: bool
    witness: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.ok


def _set_sheaf_condition(F: SetPresheaf, S: Sieve) -> bool:
    C = F.base
    fams = matching_families(F, S)
    x = S.apex
    if len(fams) != F.sizes[x]:
        return False
    images = set()
    for s in range(F.sizes[x]):
        images.add(tuple(int(F.maps[f][s]) for f in sorted(S.members)))
    return len(images) == F.sizes[x]


def _ab_sheaf_condition(M: AbPresheaf, S: Sieve) -> bool:
    """M(x) -> Nat(S, M) is an isomorphism."""
    from .abelian import AbMap, hom_ker_coker

    N = NatGroup(M, S)
    x = S.apex
    A = M.values[x]
    cols = [N.coords(N.restriction_vector([int(i == j) for i in range(A.ngens)])) for j in range(A.ngens)]
    Ngrp = AbGroup.from_invariants(N.invariants)
    mat = obj_matrix([[c[i] for c in cols] for i in range(Ngrp.ngens)], Ngrp.ngens, A.ngens)
    kc = hom_ker_coker(AbMap(A, Ngrp, mat))
    return kc.kernel.is_trivial() and kc.cokernel.is_trivial()


def is_sheaf(F, T: FiniteTopology, exhaustive: bool = False) -> SheafReport:
    """Sheaf condition on the pullback-stable basis (or on every covering sieve)."""
    C = T.base
    if exhaustive:
        sieves = [S for x in range(C.nobj) for S in all_sieves(C, x) if T.is_covering(S)]
    else:
        sieves = T.basis()
    cond = _set_sheaf_condition if isinstance(F, SetPresheaf) else _ab_sheaf_condition
    n = 0
    for S in sieves:
        if S.is_maximal(C):
            continue
        n += 1
        if not cond(F, S):
            return SheafReport(False, {"object": S.apex, "sieve": sorted(int(f) for f in S.members)}, n)
    return SheafReport(True, None, n)


# --- (half-)sheafification -----------------------------------------------

def half_sheafify(F, T: FiniteTopology):
    """F+(x) = Nat(min_sieve(x), F) with maps induced by pullback of sieves."""
    if isinstance(F, SetPresheaf):
        return _half_sheafify_set(F, T)[0]
    return _half_sheafify_ab(F, T)[0]


def _half_sheafify_set(F: SetPresheaf, T: FiniteTopology):
    C = F.base
    fams = [matching_families(F, T.min_sieves[x]) for x in range(C.nobj)]
    keys = []
    for x in range(C.nobj):
        mem = sorted(T.min_sieves[x].members)
        keys.append({tuple(fam[f] for f in mem): i for i, fam in enumerate(fams[x])})
    maps = []
    for u in range(C.nmor):
        y, x = int(C.dom[u]), int(C.cod[u])
        memy = sorted(T.min_sieves[y].members)
        img = []
        for fam in fams[x]:
            img.append(keys[y][tuple(fam[int(C.table[u, g])] for g in memy)])
        maps.append(img)
    Fp = SetPresheaf(C, [len(f) for f in fams], maps)
    unit = []
    for x in range(C.nobj):
        mem = sorted(T.min_sieves[x].members)
        unit.append([keys[x][tuple(int(F.maps[f][s]) for f in mem)] for s in range(F.sizes[x])])
    return Fp, unit


def _half_sheafify_ab(M: AbPresheaf, T: FiniteTopology):
    C = M.base
    nats = [NatGroup(M, T.min_sieves[x]) for x in range(C.nobj)]
    vals = [AbGroup.from_invariants(N.invariants) for N in nats]
    reps = [N.representatives() for N in nats]
    maps = []
    for u in range(C.nmor):
        y, x = int(C.dom[u]), int(C.cod[u])
        Ny, Nx = nats[y], nats[x]
        cols = []
        for fam in reps[x]:
            out = [0] * Ny.n
            for g in Ny.members:
                comp = Nx.component(fam, int(C.table[u, g]))
                o = Ny.offsets[g]
                out[o : o + len(comp)] = comp
            cols.append(Ny.coords(out))
        maps.append(obj_matrix([[c[i] for c in cols] for i in range(vals[y].ngens)], vals[y].ngens, vals[x].ngens))
    Mp = AbPresheaf(C, vals, maps)
    unit = []
    for x in range(C.nobj):
        A = M.values[x]
        cols = [nats[x].coords(nats[x].restriction_vector([int(i == j) for i in range(A.ngens)])) for j in range(A.ngens)]
        unit.append(obj_matrix([[c[i] for c in cols] for i in range(vals[x].ngens)], vals[x].ngens, A.ngens))
    return Mp, unit


def sheafify(F, T: FiniteTopology):
    """(F+)+ together with the unit F -> F# (per-object maps)."""
    if isinstance(F, SetPresheaf):
        F1, u1 = _half_sheafify_set(F, T)
        F2, u2 = _half_sheafify_set(F1, T)
        unit = [[u2[x][u1[x][s]] for s in range(F.sizes[x])] for x in range(F.base.nobj)]
        return F2, unit
    F1, u1 = _half_sheafify_ab(F, T)
    F2, u2 = _half_sheafify_ab(F1, T)
    unit = [u2[x].dot(u1[x]) if u1[x].size and u2[x].size else obj_matrix([], u2[x].shape[0], u1[x].shape[1]) for x in range(F.base.nobj)]
    return F2, unit


# --- dense subsites and (co)continuity -----------------------------------

def dense_subsite_check(T: FiniteTopology, D: Iterable[int]) -> bool:
    Dset = set(int(d) for d in D)
    C = T.base
    return all(int(C.dom[f]) in Dset for x in range(C.nobj) for f in T.min_sieves[x].members)


def is_cocontinuous(beta: FinFunctor, T_D: FiniteTopology, T_C: FiniteTopology) -> bool:
    """{u into d : beta(u) in min_C(beta d)} covers d, for every object d."""
    D = beta.source
    for d in range(D.nobj):
        S = T_C.min_sieves[int(beta.obj_map[d])]
        pulled = frozenset(int(u) for u in D.into(d) if int(beta.mor_map[u]) in S.members)
        if not T_D.is_covering(Sieve(d, pulled)):
            return False
    return True


def is_continuous(alpha: FinFunctor, T_D: FiniteTopology, T_C: FiniteTopology, require_filtered: bool = False) -> bool:
    """alpha maps minimal covering sieves to generators of covering sieves.

    With ``require_filtered`` the under-categories x/alpha must also be
    cofiltered (their opposites filtered), checked literally.
    """
    D, C = alpha.source, alpha.target
    for d in range(D.nobj):
        x = int(alpha.obj_map[d])
        imgs = [int(alpha.mor_map[f]) for f in T_D.min_sieves[d].members]
        if not T_C.is_covering(generate_sieve(C, imgs, apex=x)):
            return False
    if require_filtered:
        for x in range(C.nobj):
            cc = comma_category(alpha, x, kind="under")
            if not is_filtered(opposite(cc.cat)):
                return False
    return True


def opposite(C: FinCat) -> FinCat:
    return FinCat(C.labels, C.cod, C.dom, C.identities, C.table.T.copy(), C.mor_labels)
