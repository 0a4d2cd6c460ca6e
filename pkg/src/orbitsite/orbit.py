"""Orbit categories O(G), O_p(G), O_p°(G) and the p-coprime-index variant."""

from __future__ import annotations

import numpy as np

from . import guards
from .errors import EmptyCategory, GuardExceeded, OrbitSiteError
from .fincat import FinCat, FinFunctor, fincat_from_dict, fincat_to_dict
from .groups import PermGroup, Subgroup, group_from_spec, is_p_group, is_prime

VARIANTS = ("all", "p-subgroups", "p-nontrivial", "p-coprime-index")


def coset_rep(G: PermGroup, g: int, K: Subgroup) -> int:
    """Minimal element index in the left coset gK."""
    return int(G.mul[g, list(K.elements)].min())


def hom_orbit(H: Subgroup, K: Subgroup) -> list[int]:
    """Canonical representatives g of the cosets gK with g^-1 H g inside K."""
    G = H.parent
    reps = sorted(set(int(G.mul[g, list(K.elements)].min()) for g in range(G.order)))
    return [g for g in reps if H.conjugate(g) & K.members == H.conjugate(g)]


class OrbitCategory(FinCat):
    """An orbit category; morphism ``f`` sends xH to x g K with g = ``morphism_coset[f]``."""

    def __init__(self, group, subgroups, variant, p, labels, dom, cod, identities, table, mor_labels, cosets):
        super().__init__(labels, dom, cod, identities, table, mor_labels)
        self.group = group
        self.object_subgroup = list(subgroups)
        self.variant = variant
        self.p = p
        self.morphism_coset = np.asarray(cosets, dtype=np.int64)
        self.object_of = {H.members: i for i, H in enumerate(self.object_subgroup)}
        self._mor_index = {
            (int(self.dom[f]), int(self.cod[f]), int(self.morphism_coset[f])): f for f in range(self.nmor)
        }

    def morphism(self, x: int, y: int, g: int) -> int:
        """Morphism id of G/H_x -> G/H_y given by any representative g."""
        rep = coset_rep(self.group, g, self.object_subgroup[y])
        return self._mor_index[(x, y, rep)]

    def object_by_subgroup(self, H: Subgroup) -> int:
        return self.object_of[H.members]

    @property
    def cat(self) -> FinCat:
        return self


def _variant_subgroups(G: PermGroup, p, variant: str) -> list[Subgroup]:
    if variant not in VARIANTS:
        raise OrbitSiteError(f"unknown variant {variant!r}")
    if variant == "all":
        return list(G.subgroups)
    if p is None or not is_prime(int(p)):
        raise OrbitSiteError(f"variant {variant} requires a prime p")
    p = int(p)
    if variant == "p-subgroups":
        return [H for H in G.subgroups if is_p_group(H, p)]
    if variant == "p-nontrivial":
        return [H for H in G.subgroups if is_p_group(H, p) and H.order > 1]
    return [H for H in G.subgroups if (G.order // H.order) % p != 0]


def orbit_category(G, p=None, variant: str = "all") -> OrbitCategory:
    G = group_from_spec(G)
    subs = _variant_subgroups(G, p, variant)
    if not subs:
        raise EmptyCategory(f"orbit category {variant} for p={p} has no objects")
    g = guards.get()
    mors = []  # (dom, cod, rep)
    homs = {}
    for x, H in enumerate(subs):
        for y, K in enumerate(subs):
            if H.order > K.order or K.order % H.order:
                continue
            reps = hom_orbit(H, K)
            homs[(x, y)] = reps
            mors.extend((x, y, r) for r in reps)
            if len(mors) > g.max_morphisms:
                raise GuardExceeded(f"more than {g.max_morphisms} morphisms")
    index = {m: i for i, m in enumerate(mors)}
    n = len(mors)
    table = np.full((n, n), -1, dtype=np.int64)
    cosets = {}
    for K in subs:
        # rep_table[g] = minimal element of gK
        cosets[K.members] = G.mul[:, list(K.elements)].min(axis=1)
    dom = np.array([m[0] for m in mors], dtype=np.int64)
    cod = np.array([m[1] for m in mors], dtype=np.int64)
    reps = np.array([m[2] for m in mors], dtype=np.int64)
    for f in range(n):
        x, y, gf = mors[f]
        gs = np.nonzero(dom == y)[0]
        for gi in gs:
            _, z, gg = mors[gi]
            r = int(cosets[subs[z].members][G.mul[gf, gg]])
            table[gi, f] = index[(x, z, r)]
    ids = [index[(x, x, 0)] for x in range(len(subs))]
    labels = [f"G/{H.label()}" for H in subs]
    mlabels = [f"{r}:{x}->{y}" for x, y, r in mors]
    return OrbitCategory(G, subs, variant, p, labels, dom, cod, ids, table, mlabels, reps)


def orbit_inclusion(D: OrbitCategory, C: OrbitCategory) -> FinFunctor:
    """Inclusion of orbit categories of the same group (matched by subgroup and coset)."""
    if D.group is not C.group:
        raise OrbitSiteError("orbit categories of different groups")
    obj = np.array([C.object_of[H.members] for H in D.object_subgroup], dtype=np.int64)
    mor = np.array(
        [C.morphism(int(obj[D.dom[f]]), int(obj[D.cod[f]]), int(D.morphism_coset[f])) for f in range(D.nmor)],
        dtype=np.int64,
    )
    return FinFunctor(D, C, obj, mor)


def aut_check(C: OrbitCategory) -> dict:
    """|Aut(G/H)| = [N(H):H] and Aut(G/H) is isomorphic to N(H)/H, for every object."""
    from .groups import normalizer

    G = C.group
    for x, H in enumerate(C.object_subgroup):
        autos = [f for f in C.hom(x, x) if C.is_iso(f)]
        N = normalizer(H)
        idx = N.order // H.order
        if len(autos) != idx:
            return {"ok": False, "object": x, "kind": "order", "aut": len(autos), "index": idx}
        # phi(g) = g^-1 H is an isomorphism Aut -> N/H with phi(g' o g) = phi(g') phi(g)
        hcos = G.mul[:, list(H.elements)].min(axis=1)
        phi = {f: int(hcos[G.inv[C.morphism_coset[f]]]) for f in autos}
        if len(set(phi.values())) != len(autos):
            return {"ok": False, "object": x, "kind": "injective"}
        for f in autos:
            for g in autos:
                lhs = phi[int(C.table[g, f])]
                rhs = int(hcos[G.mul[phi[g], phi[f]]])
                if lhs != rhs:
                    return {"ok": False, "object": x, "kind": "multiplication", "pair": [g, f]}
    return {"ok": True}


def orbit_to_dict(C: OrbitCategory) -> dict:
    d = fincat_to_dict(C)
    d["group"] = C.group.descriptor()
    d["object_subgroups"] = [hex(H.members) for H in C.object_subgroup]
    d["morphism_cosets"] = [int(x) for x in C.morphism_coset]
    d["variant"] = C.variant
    d["p"] = C.p
    return d


def orbit_from_dict(d: dict) -> OrbitCategory:
    G = group_from_spec(d["group"])
    base = fincat_from_dict(d)
    subs = [G.subgroup(int(h, 16)) for h in d["object_subgroups"]]
    return OrbitCategory(
        G, subs, d["variant"], d["p"], base.labels, base.dom, base.cod, base.identities, base.table, base.mor_labels,
        d["morphism_cosets"],
    )
