"""Presheaves of finite sets and of finitely generated abelian groups."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .abelian import AbGroup, AbMap
from .fincat import FinCat
from .linalg import identity, matmul, obj_matrix, zeros


class AbPresheaf:
    """Contravariant functor to Ab.

    ``maps[f]`` is the matrix of M(f): M(cod f) -> M(dom f), shape
    (ngens of M(dom f), ngens of M(cod f)).
    """

    def __init__(self, base: FinCat, values: Sequence[AbGroup], maps: Sequence):
        self.base = base
        self.values = list(values)
        self.maps = [np.asarray(m, dtype=object) for m in maps]
        if len(self.values) != base.nobj or len(self.maps) != base.nmor:
            raise ValueError("presheaf data does not match the base category")
        for f, m in enumerate(self.maps):
            want = (self.values[int(base.dom[f])].ngens, self.values[int(base.cod[f])].ngens)
            if m.shape != want:
                self.maps[f] = m.reshape(want)

    @classmethod
    def constant(cls, C: FinCat, invariants: Sequence[int]) -> "AbPresheaf":
        A = AbGroup.from_invariants(invariants)
        n = A.ngens
        return cls(C, [A] * C.nobj, [identity(n) for _ in range(C.nmor)])

    @classmethod
    def zero(cls, C: FinCat) -> "AbPresheaf":
        return cls(C, [AbGroup.zero()] * C.nobj, [zeros(0, 0) for _ in range(C.nmor)])

    def value(self, x: int) -> AbGroup:
        return self.values[x]

    def invariants(self) -> list[list[int]]:
        return [v.invariants for v in self.values]

    def is_zero(self) -> bool:
        return all(v.is_trivial() for v in self.values)

    def map(self, f: int) -> AbMap:
        C = self.base
        return AbMap(self.values[int(C.cod[f])], self.values[int(C.dom[f])], self.maps[f])

    def validate(self) -> dict:
        C = self.base
        for f in range(C.nmor):
            if not self.map(f).is_well_defined():
                return {"ok": False, "kind": "ill-defined", "morphism": f}
        for x in range(C.nobj):
            i = int(C.identities[x])
            A = self.values[x]
            diff = self.maps[i] - identity(A.ngens)
            if not AbMap(A, A, diff).is_zero():
                return {"ok": False, "kind": "identity", "object": x}
        g_idx, f_idx = np.nonzero(C.table >= 0)
        for g, f in zip(g_idx, f_idx):
            gf = int(C.table[g, f])
            lhs = self.maps[gf]
            rhs = matmul(self.maps[f], self.maps[g])
            src = self.values[int(C.cod[g])]
            tgt = self.values[int(C.dom[f])]
            if not AbMap(src, tgt, lhs - rhs).is_zero():
                return {"ok": False, "kind": "functoriality", "pair": [int(g), int(f)]}
        return {"ok": True}

    def is_objectwise_free(self) -> bool:
        return all(v.relations.shape[1] == 0 for v in self.values)

    def simplified(self) -> "AbPresheaf":
        """Isomorphic presheaf with values in invariant-factor (diagonal) form."""
        qms = [v.qm for v in self.values]
        lifts = [obj_matrix([[l[g] for l in q.lifts()] for g in range(v.ngens)], v.ngens, q.rank) for q, v in zip(qms, self.values)]
        vals = [AbGroup.from_invariants(q.invariants) for q in qms]
        C = self.base
        maps = []
        for f in range(C.nmor):
            x, y = int(C.dom[f]), int(C.cod[f])
            img = matmul(self.maps[f], lifts[y])  # columns in M(x) coordinates
            cols = [qms[x].coords(img[:, j]) for j in range(img.shape[1])]
            maps.append(obj_matrix([[c[i] for c in cols] for i in range(qms[x].rank)], qms[x].rank, qms[y].rank))
        return AbPresheaf(C, vals, maps)

    def direct_sum(self, other: "AbPresheaf") -> "AbPresheaf":
        C = self.base
        vals = [AbGroup.from_invariants(a.relation_moduli() + b.relation_moduli()) for a, b in zip(self.values, other.values)]
        maps = []
        for f in range(C.nmor):
            a, b = self.maps[f], other.maps[f]
            M = zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
            M[: a.shape[0], : a.shape[1]] = a
            M[a.shape[0] :, a.shape[1] :] = b
            maps.append(M)
        return AbPresheaf(C, vals, maps)

    def to_dict(self) -> dict:
        S = self if all(v.is_diagonal() for v in self.values) else self.simplified()
        return {
            "kind": "abelian",
            "values": [v.relation_moduli() for v in S.values],
            "maps": [[[int(x) for x in row] for row in m.tolist()] for m in S.maps],
        }

    @classmethod
    def from_dict(cls, C: FinCat, d: dict) -> "AbPresheaf":
        vals = [AbGroup.from_invariants(v) for v in d["values"]]
        maps = [obj_matrix(m, vals[int(C.dom[f])].ngens, vals[int(C.cod[f])].ngens) for f, m in enumerate(d["maps"])]
        return cls(C, vals, maps)


class SetPresheaf:
    """Contravariant functor to finite sets; ``maps[f][i]`` is F(f) applied to element i of F(cod f)."""

    def __init__(self, base: FinCat, sizes: Sequence[int], maps: Sequence):
        self.base = base
        self.sizes = [int(s) for s in sizes]
        self.maps = [np.asarray(m, dtype=np.int64).reshape(-1) for m in maps]
        for f, m in enumerate(self.maps):
            if len(m) != self.sizes[int(base.cod[f])]:
                raise ValueError(f"map {f} has wrong length")

    @classmethod
    def constant(cls, C: FinCat, n: int) -> "SetPresheaf":
        return cls(C, [n] * C.nobj, [np.arange(n) for _ in range(C.nmor)])

    def validate(self) -> dict:
        C = self.base
        for f, m in enumerate(self.maps):
            if len(m) and (m.min() < 0 or m.max() >= self.sizes[int(C.dom[f])]):
                return {"ok": False, "kind": "range", "morphism": f}
        for x in range(C.nobj):
            if not np.array_equal(self.maps[int(C.identities[x])], np.arange(self.sizes[x])):
                return {"ok": False, "kind": "identity", "object": x}
        g_idx, f_idx = np.nonzero(C.table >= 0)
        for g, f in zip(g_idx, f_idx):
            gf = int(C.table[g, f])
            if not np.array_equal(self.maps[gf], self.maps[f][self.maps[g]]):
                return {"ok": False, "kind": "functoriality", "pair": [int(g), int(f)]}
        return {"ok": True}

    def to_dict(self) -> dict:
        return {"kind": "set", "sizes": self.sizes, "maps": [[int(x) for x in m] for m in self.maps]}

    @classmethod
    def from_dict(cls, C: FinCat, d: dict) -> "SetPresheaf":
        return cls(C, d["sizes"], d["maps"])


def presheaf_from_dict(C: FinCat, d: dict):
    if d.get("kind") == "set":
        return SetPresheaf.from_dict(C, d)
    return AbPresheaf.from_dict(C, d)



def restrict(F, alpha):
    """Precomposition with a functor ``alpha: D -> C``; returns a presheaf on D."""
    D = alpha.source
    if isinstance(F, SetPresheaf):
        return SetPresheaf(D, [F.sizes[int(c)] for c in alpha.obj_map], [F.maps[int(m)] for m in alpha.mor_map])
    return AbPresheaf(D, [F.values[int(c)] for c in alpha.obj_map], [F.maps[int(m)] for m in alpha.mor_map])


class AbPresheafMap:
    """Natural transformation of abelian presheaves; ``components[x]`` is a matrix source(x) -> target(x)."""

    def __init__(self, source: AbPresheaf, target: AbPresheaf, components):
        self.source, self.target = source, target
        self.components = [
            np.asarray(c, dtype=object).reshape(target.values[x].ngens, source.values[x].ngens)
            for x, c in enumerate(components)
        ]

    def at(self, x: int) -> AbMap:
        return AbMap(self.source.values[x], self.target.values[x], self.components[x])

    def is_natural(self) -> bool:
        C = self.source.base
        for f in range(C.nmor):
            x, y = int(C.dom[f]), int(C.cod[f])
            lhs = matmul(self.components[x], self.source.maps[f])
            rhs = matmul(self.target.maps[f], self.components[y])
            if not AbMap(self.source.values[y], self.target.values[x], lhs - rhs).is_zero():
                return False
        return all(self.at(x).is_well_defined() for x in range(C.nobj))

    def compose(self, other: "AbPresheafMap") -> "AbPresheafMap":
        """self after other."""
        return AbPresheafMap(other.source, self.target, [matmul(a, b) for a, b in zip(self.components, other.components)])

    def equals(self, other: "AbPresheafMap") -> bool:
        return all(
            AbMap(self.source.values[x], self.target.values[x], a - b).is_zero()
            for x, (a, b) in enumerate(zip(self.components, other.components))
        )

    def is_identity(self) -> bool:
        return self.equals(AbPresheafMap(self.source, self.source, [identity(v.ngens) for v in self.source.values]))


class SetPresheafMap:
    """Natural transformation of set presheaves; ``components[x][i]`` is the image of element i."""

    def __init__(self, source: SetPresheaf, target: SetPresheaf, components):
        self.source, self.target = source, target
        self.components = [np.asarray(c, dtype=np.int64).reshape(-1) for c in components]

    def is_natural(self) -> bool:
        C = self.source.base
        for f in range(C.nmor):
            x, y = int(C.dom[f]), int(C.cod[f])
            if not np.array_equal(self.components[x][self.source.maps[f]], self.target.maps[f][self.components[y]]):
                return False
        return True

    def compose(self, other: "SetPresheafMap") -> "SetPresheafMap":
        return SetPresheafMap(other.source, self.target, [a[b] for a, b in zip(self.components, other.components)])

    def is_identity(self) -> bool:
        return all(np.array_equal(c, np.arange(n)) for c, n in zip(self.components, self.source.sizes))
