"""Finitely generated abelian groups, maps between them, cochain complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import IllDefinedMap
from .linalg import (
    Lattice,
    QuotientModule,
    SparseMatrix,
    _to_dict,
    columns_of,
    kernel_lattice,
    matmul,
    obj_matrix,
    sparse_compose,
    zeros,
)


def _cols(M) -> list[dict]:
    return columns_of(M)


class AbGroup:
    """Z^ngens modulo the column span of ``relations`` (ngens x r)."""

    def __init__(self, ngens: int, relations=None):
        self.ngens = int(ngens)
        if relations is None:
            relations = zeros(self.ngens, 0)
        if isinstance(relations, SparseMatrix):
            # large presentations (cochain groups) stay sparse
            self.relations = relations
            self._qm = None
            return
        R = np.asarray(relations, dtype=object)
        if R.ndim != 2 or R.shape[0] != self.ngens:
            R = obj_matrix(R.tolist() if R.size else [], self.ngens, R.shape[1] if R.ndim == 2 else 0)
        self.relations = R
        self._qm = None

    @classmethod
    def from_invariants(cls, invs: Sequence[int]) -> "AbGroup":
        """Diagonal presentation Z/d1 + ... (0 means Z, 1 allowed but trivial)."""
        invs = [int(d) for d in invs]
        n = len(invs)
        cols = [j for j, d in enumerate(invs) if d != 0]
        R = zeros(n, len(cols))
        for k, j in enumerate(cols):
            R[j, k] = invs[j]
        g = cls(n, R)
        return g

    @classmethod
    def free(cls, n: int) -> "AbGroup":
        return cls(n)

    @classmethod
    def zero(cls) -> "AbGroup":
        return cls(0)

    @property
    def qm(self) -> QuotientModule:
        if self._qm is None:
            self._qm = QuotientModule(self.ngens, _cols(self.relations))
        return self._qm

    @property
    def invariants(self) -> list[int]:
        return list(self.qm.invariants)

    def is_trivial(self) -> bool:
        return not self.invariants

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        o = 1
        for d in self.invariants:
            if d == 0:
                return None
            o *= d
        return o

    def is_diagonal(self) -> bool:
        return all(len(c) <= 1 for c in _cols(self.relations))

    def relation_moduli(self) -> list[int]:
        """For diagonal presentations: modulus per generator (0 = free)."""
        m = [0] * self.ngens
        for c in _cols(self.relations):
            for i, v in c.items():
                m[i] = int(np.gcd(m[i], abs(int(v)))) if m[i] else abs(int(v))
        return m

    def contains_zero(self, v) -> bool:
        return self.qm.is_zero(v)

    def __repr__(self):
        return f"AbGroup({format_invariants(self.invariants)})"

    def __eq__(self, other):  # isomorphism
        return isinstance(other, AbGroup) and self.invariants == other.invariants

    __hash__ = None


def format_invariants(invs: Sequence[int]) -> str:
    if not invs:
        return "0"
    return " + ".join("Z" if d == 0 else f"Z/{d}" for d in invs)


@dataclass
class AbMap:
    """Homomorphism given on generators; ``matrix`` is target.ngens x source.ngens."""

    source: AbGroup
    target: AbGroup
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=object).reshape(self.target.ngens, self.source.ngens)

    def is_well_defined(self) -> bool:
        img = matmul(self.matrix, self.source.relations)
        return all(self.target.contains_zero(img[:, j]) for j in range(img.shape[1]))

    def check(self):
        if not self.is_well_defined():
            raise IllDefinedMap("relations of the source do not map into the target relations")
        return self

    def compose(self, other: "AbMap") -> "AbMap":
        """self after other."""
        return AbMap(other.source, self.target, matmul(self.matrix, other.matrix))

    def is_zero(self) -> bool:
        M = self.matrix
        return all(self.target.contains_zero(M[:, j]) for j in range(M.shape[1]))


@dataclass
class KerCoker:
    kernel: AbGroup
    inclusion: AbMap
    image: AbGroup
    cokernel: AbGroup
    projection: AbMap


class SubquotientGroup:
    """ker(F: P -> T) for P = Z^n/R given by a QuotientModule and target relations.

    Produces the kernel in invariant form with coordinate and lift maps.
    """

    def __init__(self, P: QuotientModule, F_cols: list[dict], target_relations: list[dict]):
        s = P.rank
        self.P = P
        # A' = F . lifts : columns indexed by P's invariant generators
        lifts = P.lifts()
        Ap = []
        for v in lifts:
            col: dict = {}
            for g, x in enumerate(v):
                if x:
                    for r, y in F_cols[g].items():
                        nv = col.get(r, 0) + x * y
                        if nv:
                            col[r] = nv
                        else:
                            col.pop(r, None)
            Ap.append(col)
        Y = kernel_lattice(Ap, s, target_relations)
        self.Y = Y
        # diag(d_P) lies in Y; express in Y coordinates
        rels = []
        for k, d in enumerate(P.invariants):
            if d:
                c = Y.coords({k: d})
                assert c is not None, "torsion relation outside cocycle lattice"
                rels.append(_to_dict(c))
        self.H = QuotientModule(Y.rank, rels)

    @property
    def invariants(self) -> list[int]:
        return self.H.invariants

    def coords(self, v) -> list[int]:
        """Coordinates (in invariant form) of an element of ker given as a vector of Z^n."""
        y = self.P.coords(v, reduce=False)
        c = self.Y.coords(y)
        if c is None:
            raise ValueError("vector does not lie in the kernel")
        return self.H.coords(c)

    def representatives(self) -> list[list[int]]:
        """Vectors in Z^n representing the invariant generators."""
        out = []
        Plifts = self.P.lifts()
        for hl in self.H.lifts():
            y = self.Y.vector(hl)
            v = [0] * self.P.n
            for k, x in enumerate(y):
                if x:
                    for g, z in enumerate(Plifts[k]):
                        if z:
                            v[g] += x * z
            out.append(v)
        return out


def hom_ker_coker(f: AbMap) -> KerCoker:
    if not f.is_well_defined():
        raise IllDefinedMap("relations of the source do not map into the target relations")
    S, T = f.source, f.target
    F_cols = _cols(f.matrix)
    Rt = _cols(T.relations)
    K = SubquotientGroup(S.qm, F_cols, Rt)
    kgroup = AbGroup.from_invariants(K.invariants)
    reps = K.representatives()
    inc = AbMap(kgroup, S, obj_matrix([[reps[k][g] for k in range(len(reps))] for g in range(S.ngens)], S.ngens, len(reps)))
    # image = (im F + R_T) / R_T
    L = Lattice(T.ngens, [c for c in F_cols if c] + Rt)
    rels = []
    for c in Rt:
        cc = L.coords(c)
        rels.append(_to_dict(cc))
    img = AbGroup.from_invariants(QuotientModule(L.rank, rels).invariants)
    C = QuotientModule(T.ngens, Rt + F_cols)
    cok = AbGroup.from_invariants(C.invariants)
    proj = AbMap(T, cok, obj_matrix([C.coords([int(i == g) for i in range(T.ngens)], reduce=False) for g in range(T.ngens)], T.ngens, C.rank).T)
    return KerCoker(kgroup, inc, img, cok, proj)


def is_isomorphism(f: AbMap) -> bool:
    kc = hom_ker_coker(f)
    return kc.kernel.is_trivial() and kc.cokernel.is_trivial()


@dataclass
class CochainComplexZ:
    """Groups C^0..C^N with differentials d^i: C^i -> C^{i+1} (matrices)."""

    groups: list
    differentials: list = field(default_factory=list)

    def __post_init__(self):
        assert len(self.differentials) in (len(self.groups) - 1, len(self.groups))

    def d(self, i: int) -> np.ndarray | None:
        if i < 0:
            return None
        if i < len(self.differentials):
            return self.differentials[i]
        return None

    def check_d_squared(self) -> bool:
        for i in range(len(self.differentials) - 1):
            dd = sparse_compose(self.differentials[i + 1], self.differentials[i])
            tgt = self.groups[i + 2]
            n = tgt.ngens
            for col in dd.cols:
                if col and not tgt.contains_zero([col.get(r, 0) for r in range(n)]):
                    return False
        return True


class CohomologyGroup:
    """H^i of a cochain complex with coordinates and cocycle representatives."""

    def __init__(self, X: CochainComplexZ, i: int):
        Ci = X.groups[i]
        prev = X.d(i - 1)
        rel_cols = _cols(Ci.relations)
        if prev is not None:
            rel_cols = rel_cols + _cols(prev)
        P = QuotientModule(Ci.ngens, rel_cols)
        di = X.d(i)
        if di is None or i + 1 >= len(X.groups):
            F_cols = [{} for _ in range(Ci.ngens)]
            Rt: list = []
        else:
            F_cols = _cols(di)
            Rt = _cols(X.groups[i + 1].relations)
        self._sub = SubquotientGroup(P, F_cols, Rt)
        self.degree = i

    @property
    def invariants(self) -> list[int]:
        return list(self._sub.invariants)

    def group(self) -> AbGroup:
        return AbGroup.from_invariants(self.invariants)

    def coords(self, cocycle) -> list[int]:
        return self._sub.coords(cocycle)

    def representatives(self) -> list[list[int]]:
        return self._sub.representatives()


def complex_cohomology(X: CochainComplexZ, i: int) -> AbGroup:
    return CohomologyGroup(X, i).group()
