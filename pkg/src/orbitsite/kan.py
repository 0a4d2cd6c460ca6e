"""Restriction and Kan extensions of presheaves along functors."""

from __future__ import annotations

import itertools

import numpy as np

from . import guards
from .abelian import AbGroup, SubquotientGroup
from .cohomology import BarComplex, cochain_map, induced_map
from .errors import EnumerationGuardExceeded
from .fincat import FinCat, FinFunctor, comma_category, full_subcategory
from .linalg import QuotientModule, identity, obj_matrix, zeros
from .presheaves import AbPresheaf, AbPresheafMap, SetPresheaf, SetPresheafMap, restrict

__all__ = [
    "restrict",
    "RightKan",
    "right_kan",
    "right_kan_unit",
    "right_kan_counit",
    "right_kan_on_map",
    "left_kan_set",
    "derived_right_kan",
]


def _over_objects(alpha: FinFunctor, x: int) -> list[tuple[int, int]]:
    D, C = alpha.source, alpha.target
    return [(d, int(t)) for d in range(D.nobj) for t in C.hom(int(alpha.obj_map[d]), x)]


class _AbLimit:
    """lim over alpha/x of M o proj, as a kernel inside the product of the M(d)."""

    def __init__(self, M: AbPresheaf, alpha: FinFunctor, x: int):
        D, C = alpha.source, alpha.target
        self.objects = _over_objects(alpha, x)
        self.index = {o: i for i, o in enumerate(self.objects)}
        self.offsets = []
        off = 0
        rels: list[dict] = []
        for d, _ in self.objects:
            self.offsets.append(off)
            R = M.values[d].relations
            for j in range(R.shape[1]):
                rels.append({off + i: int(R[i, j]) for i in range(R.shape[0]) if R[i, j]})
            off += M.values[d].ngens
        self.n = off
        P = QuotientModule(off, rels)
        # for u: d -> d' and object (d', t'): M(u) m_(d',t') = m_(d, t' alpha(u))
        cols: list[dict] = [dict() for _ in range(off)]
        trel: list[dict] = []
        row = 0
        for k2, (d2, t2) in enumerate(self.objects):
            for u in D.into(d2):
                if D.is_identity[u]:
                    continue
                d = int(D.dom[u])
                t = int(C.table[t2, int(alpha.mor_map[u])])
                k = self.index[(d, t)]
                Mu = M.maps[u]
                tgt = M.values[d]
                o2, o = self.offsets[k2], self.offsets[k]
                for i in range(tgt.ngens):
                    for j in range(Mu.shape[1]):
                        if Mu[i, j]:
                            cols[o2 + j][row + i] = cols[o2 + j].get(row + i, 0) + int(Mu[i, j])
                    cols[o + i][row + i] = cols[o + i].get(row + i, 0) - 1
                R = tgt.relations
                for j in range(R.shape[1]):
                    trel.append({row + i: int(R[i, j]) for i in range(R.shape[0]) if R[i, j]})
                row += tgt.ngens
        for c in cols:
            for key in [key for key, v in c.items() if v == 0]:
                del c[key]
        self.K = SubquotientGroup(P, cols, trel)
        self.M = M

    def component(self, fam, k: int) -> list[int]:
        d = self.objects[k][0]
        o = self.offsets[k]
        return list(fam[o : o + self.M.values[d].ngens])


class RightKan:
    """RK_alpha(M) for an abelian presheaf M on D, with its limit data per object."""

    def __init__(self, M: AbPresheaf, alpha: FinFunctor):
        C = alpha.target
        self.M, self.alpha = M, alpha
        self.limits = [_AbLimit(M, alpha, x) for x in range(C.nobj)]
        self.reps = [L.K.representatives() for L in self.limits]
        values = [AbGroup.from_invariants(L.K.invariants) for L in self.limits]
        maps = []
        for h in range(C.nmor):
            xp, x = int(C.dom[h]), int(C.cod[h])
            maps.append(self._structure(h, xp, x, values))
        self.presheaf = AbPresheaf(C, values, maps)

    def _structure(self, h: int, xp: int, x: int, values) -> np.ndarray:
        C = self.alpha.target
        L, Lp = self.limits[x], self.limits[xp]
        out = zeros(values[xp].ngens, values[x].ngens)
        for j, fam in enumerate(self.reps[x]):
            new = [0] * Lp.n
            for kp, (d, tp) in enumerate(Lp.objects):
                k = L.index[(d, int(C.table[h, tp]))]
                comp = L.component(fam, k)
                o = Lp.offsets[kp]
                new[o : o + len(comp)] = comp
            for i, c in enumerate(Lp.K.coords(new)):
                out[i, j] = c
        return out

    def family_coords(self, x: int, fam) -> list[int]:
        return self.limits[x].K.coords(fam)


def right_kan(M, alpha: FinFunctor):
    """Right Kan extension along alpha (abelian or set-valued)."""
    if isinstance(M, SetPresheaf):
        return _right_kan_set(M, alpha)[0]
    return RightKan(M, alpha).presheaf


def right_kan_unit(N, alpha: FinFunctor, rk=None):
    """eta: N -> RK_alpha(Res_alpha N) for a presheaf N on the target of alpha."""
    if isinstance(N, SetPresheaf):
        R, fams = _right_kan_set(restrict(N, alpha), alpha)
        comps = []
        for x in range(alpha.target.nobj):
            objs = _over_objects(alpha, x)
            lookup = {f: i for i, f in enumerate(fams[x])}
            comps.append([lookup[tuple(int(N.maps[t][a]) for _, t in objs)] for a in range(N.sizes[x])])
        return SetPresheafMap(N, R, comps)
    rk = rk or RightKan(restrict(N, alpha), alpha)
    comps = []
    for x in range(alpha.target.nobj):
        L = rk.limits[x]
        cols = []
        for g in range(N.values[x].ngens):
            fam = [0] * L.n
            for k, (d, t) in enumerate(L.objects):
                v = N.maps[t][:, g]
                o = L.offsets[k]
                fam[o : o + len(v)] = [int(a) for a in v]
            cols.append(L.K.coords(fam))
        comps.append(obj_matrix([[c[i] for c in cols] for i in range(rk.presheaf.values[x].ngens)], rk.presheaf.values[x].ngens, len(cols)))
    return AbPresheafMap(N, rk.presheaf, comps)


def right_kan_counit(M, alpha: FinFunctor, rk=None):
    """epsilon: Res_alpha RK_alpha(M) -> M, the component at (d, identity)."""
    D, C = alpha.source, alpha.target
    if isinstance(M, SetPresheaf):
        R, fams = _right_kan_set(M, alpha)
        comps = []
        for d in range(D.nobj):
            x = int(alpha.obj_map[d])
            k = _over_objects(alpha, x).index((d, int(C.identities[x])))
            comps.append([f[k] for f in fams[x]])
        return SetPresheafMap(restrict(R, alpha), M, comps)
    rk = rk or RightKan(M, alpha)
    comps = []
    for d in range(D.nobj):
        x = int(alpha.obj_map[d])
        L = rk.limits[x]
        k = L.index[(d, int(C.identities[x]))]
        cols = [L.component(fam, k) for fam in rk.reps[x]]
        comps.append(obj_matrix([[c[i] for c in cols] for i in range(M.values[d].ngens)], M.values[d].ngens, len(cols)))
    return AbPresheafMap(restrict(rk.presheaf, alpha), M, comps)


def right_kan_on_map(phi: AbPresheafMap, alpha: FinFunctor, rk_src=None, rk_tgt=None) -> AbPresheafMap:
    """RK_alpha(phi) for a natural transformation phi: M -> M' of presheaves on D."""
    rk_src = rk_src or RightKan(phi.source, alpha)
    rk_tgt = rk_tgt or RightKan(phi.target, alpha)
    comps = []
    for x in range(alpha.target.nobj):
        Ls, Lt = rk_src.limits[x], rk_tgt.limits[x]
        cols = []
        for fam in rk_src.reps[x]:
            new = [0] * Lt.n
            for k, (d, _) in enumerate(Ls.objects):
                v = phi.components[d].dot(np.asarray(Ls.component(fam, k), dtype=object)) if len(Ls.component(fam, k)) else []
                o = Lt.offsets[k]
                new[o : o + len(v)] = [int(a) for a in v]
            cols.append(Lt.K.coords(new))
        n = rk_tgt.presheaf.values[x].ngens
        comps.append(obj_matrix([[c[i] for c in cols] for i in range(n)], n, len(cols)))
    return AbPresheafMap(rk_src.presheaf, rk_tgt.presheaf, comps)


# --- set-valued right Kan extension ----------------------------------------

def _compatible_families(M: SetPresheaf, alpha: FinFunctor, x: int) -> list[tuple]:
    D, C = alpha.source, alpha.target
    objs = _over_objects(alpha, x)
    index = {o: i for i, o in enumerate(objs)}
    limit = guards.get().max_enumeration
    # constraints attached to the later of the two positions
    cons: list[list[tuple[int, int, int]]] = [[] for _ in objs]
    for k2, (d2, t2) in enumerate(objs):
        for u in D.into(d2):
            if D.is_identity[u]:
                continue
            d = int(D.dom[u])
            k = index[(d, int(C.table[t2, int(alpha.mor_map[u])]))]
            cons[max(k, k2)].append((k, k2, int(u)))
    out: list[tuple] = []
    fam = [0] * len(objs)
    steps = 0

    def rec(pos: int):
        nonlocal steps
        if pos == len(objs):
            out.append(tuple(fam))
            return
        for a in range(M.sizes[objs[pos][0]]):
            steps += 1
            if steps > limit:
                raise EnumerationGuardExceeded(f"matching-family search exceeds {limit} steps")
            fam[pos] = a
            if all(M.maps[u][fam[k2]] == fam[k] for k, k2, u in cons[pos]):
                rec(pos + 1)

    rec(0)
    return out


def _right_kan_set(M: SetPresheaf, alpha: FinFunctor):
    C = alpha.target
    fams = [_compatible_families(M, alpha, x) for x in range(C.nobj)]
    maps = []
    for h in range(C.nmor):
        xp, x = int(C.dom[h]), int(C.cod[h])
        objs, objs_p = _over_objects(alpha, x), _over_objects(alpha, xp)
        index = {o: i for i, o in enumerate(objs)}
        lookup = {f: i for i, f in enumerate(fams[xp])}
        pos = [index[(d, int(C.table[h, tp]))] for d, tp in objs_p]
        maps.append([lookup[tuple(f[k] for k in pos)] for f in fams[x]])
    return SetPresheaf(C, [len(f) for f in fams], maps), fams


# --- left Kan extension of set presheaves ------------------------------------

class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class LeftKanSet:
    """LK_alpha(M)(x) = disjoint union of M(d) over t: x -> alpha(d), modulo zig-zags."""

    def __init__(self, M: SetPresheaf, alpha: FinFunctor):
        D, C = alpha.source, alpha.target
        self.M, self.alpha = M, alpha
        self.elements = []  # per x: list of (d, t, m)
        self.classes = []  # per x: element index -> class id
        self.class_rep = []  # per x: class id -> element index
        for x in range(C.nobj):
            elems = [(d, int(t), m) for d in range(D.nobj) for t in C.hom(x, int(alpha.obj_map[d])) for m in range(M.sizes[d])]
            index = {e: i for i, e in enumerate(elems)}
            uf = _UnionFind(len(elems))
            for d, t, _ in {(d, t, 0) for d, t, _ in elems}:
                for u in D.out_of(d):
                    if D.is_identity[u]:
                        continue
                    d2 = int(D.cod[u])
                    t2 = int(C.table[int(alpha.mor_map[u]), t])
                    for m2 in range(M.sizes[d2]):
                        uf.union(index[(d2, t2, m2)], index[(d, t, int(M.maps[u][m2]))])
            roots = [uf.find(i) for i in range(len(elems))]
            ids = {r: k for k, r in enumerate(sorted(set(roots)))}
            self.elements.append(elems)
            self.classes.append([ids[r] for r in roots])
            self.class_rep.append(sorted(set(roots)))
        maps = []
        for h in range(C.nmor):
            xp, x = int(C.dom[h]), int(C.cod[h])
            index_p = {e: i for i, e in enumerate(self.elements[xp])}
            row = []
            for rep in self.class_rep[x]:
                d, t, m = self.elements[x][rep]
                row.append(self.classes[xp][index_p[(d, int(C.table[t, h]), m)]])
            maps.append(row)
        self.presheaf = SetPresheaf(C, [len(r) for r in self.class_rep], maps)

    def class_of(self, x: int, d: int, t: int, m: int) -> int:
        return self.classes[x][self.elements[x].index((d, t, m))]


def left_kan_set(M: SetPresheaf, alpha: FinFunctor) -> SetPresheaf:
    return LeftKanSet(M, alpha).presheaf


def left_kan_unit(M: SetPresheaf, alpha: FinFunctor, lk: LeftKanSet | None = None) -> SetPresheafMap:
    """M -> Res LK(M): m in M(d) goes to the class of (d, id, m)."""
    lk = lk or LeftKanSet(M, alpha)
    C = alpha.target
    comps = []
    for d in range(alpha.source.nobj):
        x = int(alpha.obj_map[d])
        comps.append([lk.class_of(x, d, int(C.identities[x]), m) for m in range(M.sizes[d])])
    return SetPresheafMap(M, restrict(lk.presheaf, alpha), comps)


def left_kan_counit(N: SetPresheaf, alpha: FinFunctor, lk: LeftKanSet | None = None) -> SetPresheafMap:
    """LK(Res N) -> N: the class of (d, t, n) goes to N(t)(n)."""
    lk = lk or LeftKanSet(restrict(N, alpha), alpha)
    comps = []
    for x in range(alpha.target.nobj):
        comps.append([int(N.maps[t][m]) for d, t, m in (lk.elements[x][r] for r in lk.class_rep[x])])
    return SetPresheafMap(lk.presheaf, N, comps)


def left_kan_on_map(phi: SetPresheafMap, alpha: FinFunctor, lk_src=None, lk_tgt=None) -> SetPresheafMap:
    lk_src = lk_src or LeftKanSet(phi.source, alpha)
    lk_tgt = lk_tgt or LeftKanSet(phi.target, alpha)
    comps = []
    for x in range(alpha.target.nobj):
        row = []
        for r in lk_src.class_rep[x]:
            d, t, m = lk_src.elements[x][r]
            row.append(lk_tgt.class_of(x, d, t, int(phi.components[d][m])))
        comps.append(row)
    return SetPresheafMap(lk_src.presheaf, lk_tgt.presheaf, comps)


# --- derived right Kan extension -------------------------------------------

def derived_right_kan(M: AbPresheaf, alpha: FinFunctor, j: int, normalized: bool = True, objects=None) -> AbPresheaf:
    """(R^j RK_alpha)(M): value at x is H^j(alpha/x, M o proj).

    With ``objects`` only those values are computed and the result lives on the
    full subcategory they span (equal to restricting the full answer).
    """
    if j < 0:
        raise ValueError("degree must be nonnegative")
    C = alpha.target
    if objects is None:
        objs = list(range(C.nobj))
        base = C
    else:
        objs = sorted(int(x) for x in objects)
        base, inc = full_subcategory(C, objs)
    commas = [comma_category(alpha, x, "over") for x in objs]
    mindex = []
    bars = []
    groups = []
    for cc in commas:
        N = restrict(M, cc.projection)
        B = BarComplex(cc.cat, N, j + 1, normalized)
        H = B.cohomology(j)
        bars.append((B, H))
        groups.append(AbGroup.from_invariants(H.invariants))
        mindex.append({(int(cc.cat.dom[k]), int(cc.cat.cod[k]), int(cc.mor_u[k])): k for k in range(cc.cat.nmor)})
    maps = []
    for h in range(base.nmor):
        xp, x = int(base.dom[h]), int(base.cod[h])
        hC = h if objects is None else int(inc.mor_map[h])
        src, tgt = commas[x], commas[xp]
        # functor alpha/xp -> alpha/x: (d, t) -> (d, h t), u -> u
        oindex = {o: i for i, o in enumerate(src.objects)}
        obj_map = np.array([oindex[(d, int(C.table[hC, t]))] for d, t in tgt.objects], dtype=np.int64)
        mor_map = np.array(
            [
                mindex[x][(int(obj_map[tgt.cat.dom[k]]), int(obj_map[tgt.cat.cod[k]]), int(tgt.mor_u[k]))]
                for k in range(tgt.cat.nmor)
            ],
            dtype=np.int64,
        )
        F = FinFunctor(tgt.cat, src.cat, obj_map, mor_map)
        (Bs, Hs), (Bt, Ht) = bars[x], bars[xp]
        if not Hs.invariants or not Ht.invariants:
            maps.append(zeros(len(Ht.invariants), len(Hs.invariants)))
            continue
        cm = cochain_map(Bs, Bt, j, F, lambda y, _t=tgt: identity(M.values[_t.objects[y][0]].ngens))
        maps.append(induced_map(Hs, Ht, cm))
    return AbPresheaf(base, groups, maps)
