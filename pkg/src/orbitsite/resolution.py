"""Ext over a category algebra via resolutions by representable presheaves.

This is the second cohomology engine: it never builds a nerve.  A presheaf
that is objectwise free is covered by sums of Z Hom(-, x); kernels are taken
objectwise and covered again.  Hom into a coefficient presheaf M is then read
off by Yoneda, Hom(Z Hom(-, x), M) = M(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import guards
from .abelian import AbGroup, CochainComplexZ, CohomologyGroup
from .errors import RankGuardExceeded
from .fincat import FinCat, FinFunctor, skeleton
from .linalg import Lattice, QuotientModule, SparseMatrix, _to_dict, identity, kernel_lattice, obj_matrix, zeros
from .presheaves import AbPresheaf, restrict
from .sites import Sieve


# --- linearized sieves ----------------------------------------------------

def z_linearize(C: FinCat, S: Sieve) -> AbPresheaf:
    """Z S: free abelian group on S(y) at y, maps by precomposition."""
    comp = [sorted(int(f) for f in S.members if int(C.dom[f]) == y) for y in range(C.nobj)]
    pos = [{f: i for i, f in enumerate(c)} for c in comp]
    values = [AbGroup.free(len(c)) for c in comp]
    maps = []
    for f in range(C.nmor):
        x, y = int(C.dom[f]), int(C.cod[f])
        M = zeros(len(comp[x]), len(comp[y]))
        for j, s in enumerate(comp[y]):
            M[pos[x][int(C.table[s, f])], j] = 1
        maps.append(M)
    return AbPresheaf(C, values, maps)


def z_constant(C: FinCat) -> AbPresheaf:
    """The constant presheaf Z."""
    return AbPresheaf.constant(C, [0])


@dataclass
class ShortExactSequence:
    """0 -> Z S -> Z Hom(-, x) -> Q -> 0; for x terminal the middle term is Z-bar."""

    sub: AbPresheaf
    whole: AbPresheaf
    quotient: AbPresheaf
    inclusion: list  # per object: matrix sub(y) -> whole(y)
    projection: list  # per object: matrix whole(y) -> quotient(y)
    exact: bool = False


def ses_quotient(C: FinCat, S: Sieve) -> ShortExactSequence:
    """Quotient of the representable on the apex by the linearized sieve, exactness verified."""
    x = S.apex
    ZS = z_linearize(C, S)
    H = z_linearize(C, Sieve(x, frozenset(f for f in range(C.nmor) if int(C.cod[f]) == x)))
    homs = [C.hom(y, x) for y in range(C.nobj)]
    rest = [[int(t) for t in h if int(t) not in S.members] for h in homs]
    inner = [sorted(int(t) for t in h if int(t) in S.members) for h in homs]
    inc, proj = [], []
    for y in range(C.nobj):
        h = [int(t) for t in homs[y]]
        I = zeros(len(h), len(inner[y]))
        for j, t in enumerate(inner[y]):
            I[h.index(t), j] = 1
        P = zeros(len(rest[y]), len(h))
        for i, t in enumerate(rest[y]):
            P[i, h.index(t)] = 1
        inc.append(I)
        proj.append(P)
    qmaps = []
    for f in range(C.nmor):
        a, b = int(C.dom[f]), int(C.cod[f])
        Mq = zeros(len(rest[a]), len(rest[b]))
        pos = {t: i for i, t in enumerate(rest[a])}
        for j, t in enumerate(rest[b]):
            s = int(C.table[t, f])
            if s in pos:
                Mq[pos[s], j] = 1
        qmaps.append(Mq)
    Q = AbPresheaf(C, [AbGroup.free(len(r)) for r in rest], qmaps)
    ses = ShortExactSequence(ZS, H, Q, inc, proj)
    ses.exact = _check_ses(ses)
    return ses


def _cols_of(A) -> list[dict]:
    return [_to_dict(A[:, j]) for j in range(A.shape[1])]


def _check_ses(ses: ShortExactSequence) -> bool:
    from .linalg import matmul

    C = ses.whole.base
    for y in range(C.nobj):
        I, P = ses.inclusion[y], ses.projection[y]
        n = I.shape[0]
        img = Lattice(n, _cols_of(I))
        if img.rank != I.shape[1]:
            return False
        if any(v for v in matmul(P, I).flat):
            return False
        ker = kernel_lattice(_cols_of(P), n) if P.shape[0] else Lattice(n, [{j: 1} for j in range(n)])
        if any(not img.contains(b) for b in ker.basis) or any(not ker.contains(b) for b in img.basis):
            return False
        if P.shape[0] and QuotientModule(P.shape[0], _cols_of(P)).invariants:
            return False
    for f in range(C.nmor):
        a, b = int(C.dom[f]), int(C.cod[f])
        if np.any(matmul(ses.whole.maps[f], ses.inclusion[b]) != matmul(ses.inclusion[a], ses.sub.maps[f])):
            return False
        if np.any(matmul(ses.quotient.maps[f], ses.projection[b]) != matmul(ses.projection[a], ses.whole.maps[f])):
            return False
    return True


# --- representable covers -------------------------------------------------

@dataclass
class Stage:
    """P = sum_k Z Hom(-, x_k) covering a presheaf F (objectwise free).

    ``gens[k] = (x_k, e_k)`` with e_k a vector of F(x_k); ``basis[y]`` lists the
    pairs (k, t: y -> x_k) spanning P(y); ``eps[y]`` is P(y) -> F(y).
    """

    gens: list
    basis: list
    index: list
    eps: list
    kernel: AbPresheaf | None = None
    kernel_basis: list = field(default_factory=list)  # per y: Lattice in P(y)
    exact: bool = True

    @property
    def support(self) -> list[int]:
        return sorted(set(x for x, _ in self.gens))

    @property
    def ranks(self) -> list[int]:
        return [len(b) for b in self.basis]


def _image_columns(F: AbPresheaf, C: FinCat, gens, y: int) -> list[list[int]]:
    cols = []
    for x, e in gens:
        for t in C.hom(y, x):
            cols.append([int(v) for v in F.maps[t].dot(np.asarray(e, dtype=object))] if len(e) else [])
    return cols


def cover(F: AbPresheaf) -> Stage:
    """Choose generators object by object, from the last object down."""
    C = F.base
    g = guards.get()
    gens: list = []
    for y in reversed(range(C.nobj)):
        r = F.values[y].ngens
        if r == 0:
            continue
        cols = [c for c in _image_columns(F, C, gens, y) if any(c)]
        qm = QuotientModule(r, cols)
        # one generator at a time, so that its translates under End(y) count
        while qm.invariants:
            lift = [int(v) for v in qm.lifts()[-1]]
            gens.append((y, lift))
            cols.extend(c for c in _image_columns(F, C, [(y, lift)], y) if any(c))
            qm = QuotientModule(r, cols)
    basis, index, eps = [], [], []
    for y in range(C.nobj):
        b = [(k, int(t)) for k, (x, _) in enumerate(gens) for t in C.hom(y, x)]
        if len(b) > g.max_rank:
            raise RankGuardExceeded(f"resolution term of rank {len(b)} exceeds guard {g.max_rank}")
        basis.append(b)
        index.append({kt: i for i, kt in enumerate(b)})
        cols = _image_columns(F, C, gens, y)
        r = F.values[y].ngens
        E = zeros(r, len(b))
        for j, c in enumerate(cols):
            for i, v in enumerate(c):
                E[i, j] = v
        eps.append(E)
    return Stage(gens, basis, index, eps)


def _kernel_presheaf(stage: Stage, F: AbPresheaf) -> None:
    C = F.base
    lats = []
    for y in range(C.nobj):
        E = stage.eps[y]
        n = E.shape[1]
        if E.shape[0] == 0:
            lats.append(Lattice(n, [{j: 1} for j in range(n)]))
        else:
            lats.append(kernel_lattice([_to_dict(E[:, j]) for j in range(n)], n))
        # surjectivity of eps at y
        if E.shape[0] and QuotientModule(E.shape[0], [_to_dict(E[:, j]) for j in range(n)]).invariants:
            stage.exact = False
    values = [AbGroup.free(L.rank) for L in lats]
    maps = []
    for f in range(C.nmor):
        x, y = int(C.dom[f]), int(C.cod[f])
        Lx, Ly = lats[x], lats[y]
        M = zeros(Lx.rank, Ly.rank)
        for j, row in enumerate(Ly.basis):
            w: dict = {}
            for c, v in row.items():
                k, t = stage.basis[y][c]
                w[stage.index[x][(k, int(C.table[t, f]))]] = v
            co = Lx.coords(w)
            if co is None:
                raise AssertionError("kernel is not a subpresheaf")
            for i, v in enumerate(co):
                M[i, j] = v
        maps.append(M)
    stage.kernel = AbPresheaf(C, values, maps)
    stage.kernel_basis = lats


@dataclass
class RepresentableResolution:
    target: AbPresheaf
    stages: list  # stage i covers the kernel of stage i-1 (stage 0 covers target)

    @property
    def length(self) -> int:
        return len(self.stages) - 1

    def is_exact(self) -> bool:
        return all(s.exact for s in self.stages) and self._images_match()

    def _images_match(self) -> bool:
        """im(P_{i+1}(y) -> P_i(y)) equals ker(P_i(y) -> P_{i-1}(y)) as lattices."""
        C = self.target.base
        for i in range(len(self.stages) - 1):
            s, nxt = self.stages[i], self.stages[i + 1]
            for y in range(C.nobj):
                K = s.kernel_basis[y]
                E = nxt.eps[y]
                img = Lattice(K.n, [K.vector(E[:, j]) for j in range(E.shape[1])])
                if img.rank != K.rank or any(not img.contains(b) for b in K.basis):
                    return False
        return True

    def supports(self) -> list[list[int]]:
        return [s.support for s in self.stages]

    def ranks(self) -> list[list[int]]:
        return [s.ranks for s in self.stages]


def resolve_by_representables(F: AbPresheaf, length: int) -> RepresentableResolution:
    """Terms P_0, ..., P_length of a resolution of an objectwise free presheaf."""
    if not F.is_objectwise_free():
        raise ValueError("resolution needs an objectwise free presheaf")
    if length < 0:
        raise ValueError("length must be nonnegative")
    stages = []
    cur = F
    for i in range(length + 1):
        st = cover(cur)
        _kernel_presheaf(st, cur)
        stages.append(st)
        cur = st.kernel
    return RepresentableResolution(F, stages)


# --- Ext ------------------------------------------------------------------

def hom_complex(res: RepresentableResolution, M: AbPresheaf) -> CochainComplexZ:
    """Hom(P_i, M) = sum_k M(x_k), with the Yoneda-induced differentials."""
    C = res.target.base
    groups, offsets = [], []
    for st in res.stages:
        off = [0]
        cols: list[dict] = []
        for x, _ in st.gens:
            R = M.values[x].relations
            o = off[-1]
            for j in range(R.shape[1]):
                cols.append({o + i: int(R[i, j]) for i in range(R.shape[0]) if R[i, j]})
            off.append(o + M.values[x].ngens)
        offsets.append(off)
        groups.append(AbGroup(off[-1], SparseMatrix(off[-1], len(cols), cols)))
    diffs = []
    for i in range(len(res.stages) - 1):
        st, nxt = res.stages[i], res.stages[i + 1]
        D = SparseMatrix(offsets[i + 1][-1], offsets[i][-1])
        for j, (xj, e) in enumerate(nxt.gens):
            # boundary of id_{x_j}: the generator as an element of P_i(x_j)
            v = st.kernel_basis[xj].vector(e)
            ro = offsets[i + 1][j]
            for c, coef in enumerate(v):
                if not coef:
                    continue
                k, t = st.basis[xj][c]
                co = offsets[i][k]
                Mt = M.maps[t]
                for a in range(Mt.shape[0]):
                    for b in range(Mt.shape[1]):
                        if Mt[a, b]:
                            D.add(ro + a, co + b, coef * int(Mt[a, b]))
        diffs.append(D)
    return CochainComplexZ(groups, diffs)


def ext_over_category(F: AbPresheaf, M: AbPresheaf, i_max: int, use_skeleton: bool = True) -> list[AbGroup]:
    """[Ext^0(F, M), ..., Ext^i_max(F, M)] over the category algebra of F's base."""
    if use_skeleton:
        sk = skeleton(F.base)
        F, M = restrict(F, sk.inclusion), restrict(M, sk.inclusion)
    res = resolve_by_representables(F, i_max + 1)
    X = hom_complex(res, M)
    return [CohomologyGroup(X, i).group() for i in range(i_max + 1)]


def ext_groups(F: AbPresheaf, M: AbPresheaf, i_max: int, use_skeleton: bool = True):
    """Like ext_over_category, also returning the resolution used."""
    if use_skeleton:
        sk = skeleton(F.base)
        F, M = restrict(F, sk.inclusion), restrict(M, sk.inclusion)
    res = resolve_by_representables(F, i_max + 1)
    X = hom_complex(res, M)
    return [CohomologyGroup(X, i).group() for i in range(i_max + 1)], res


def cech_cohomology(x: int, M: AbPresheaf, T, i: int, use_skeleton: bool = True) -> AbGroup:
    """H^i of the minimal covering sieve of x with coefficients M."""
    ZS = z_linearize(T.base, T.min_sieve(x))
    return ext_over_category(ZS, M, i, use_skeleton)[i]
