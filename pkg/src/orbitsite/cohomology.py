"""Category cohomology H^i(C, M) through the (normalized) bar complex."""

from __future__ import annotations

import numpy as np

from . import kernels
from .abelian import AbGroup, CochainComplexZ, CohomologyGroup
from .errors import ChainCountGuardExceeded
from .fincat import FinCat, FinFunctor, nerve_chains, skeleton
from .linalg import SparseMatrix
from .presheaves import AbPresheaf, restrict


def _relations_block(M: AbPresheaf, x0: np.ndarray, offsets: np.ndarray, total: int) -> SparseMatrix:
    cols = []
    for r, x in enumerate(x0):
        R = M.values[int(x)].relations
        o = int(offsets[r])
        for j in range(R.shape[1]):
            cols.append({o + i: int(R[i, j]) for i in range(R.shape[0]) if R[i, j]})
    return SparseMatrix(total, len(cols), cols)


class BarComplex:
    """C^n = sum over composable n-chains x0 -> ... -> xn of M(x0).

    ``chains[n]`` is the (N, n) array of morphism ids (object ids for n = 0);
    ``offsets[n][r]`` is the first generator of chain r's block.
    """

    def __init__(self, C: FinCat, M: AbPresheaf, n_max: int, normalized: bool = True):
        if M.base is not C and M.base.nobj != C.nobj:
            raise ValueError("coefficient presheaf lives on another category")
        self.C, self.M, self.normalized = C, M, normalized
        self.base = max(C.nmor, 1)
        if n_max >= 1 and float(self.base) ** (n_max + 1) >= 2.0**62:
            raise ChainCountGuardExceeded("chain codes would overflow 64-bit integers")
        self.chains = [nerve_chains(C, n, normalized) for n in range(n_max + 1)]
        self.codes = [None] + [kernels.chain_codes(ch, self.base) for ch in self.chains[1:]]
        ngens = np.array([v.ngens for v in M.values], dtype=np.int64)
        self.x0 = [self.chains[0]] + [C.dom[ch[:, 0]] if len(ch) else np.zeros(0, np.int64) for ch in self.chains[1:]]
        self.offsets = []
        groups = []
        for n in range(n_max + 1):
            sizes = ngens[self.x0[n]] if len(self.x0[n]) else np.zeros(0, np.int64)
            off = np.zeros(len(sizes) + 1, dtype=np.int64)
            np.cumsum(sizes, out=off[1:])
            self.offsets.append(off)
            total = int(off[-1])
            groups.append(AbGroup(total, _relations_block(M, self.x0[n], off, total)))
        diffs = [self._differential(n) for n in range(n_max)]
        self.complex = CochainComplexZ(groups, diffs)

    def index_of(self, n: int, chain) -> int:
        """Row index of a chain (tuple of morphisms, or an object for n = 0); -1 if absent."""
        if n == 0:
            return int(chain)
        code = 0
        for f in chain:
            code = code * self.base + int(f)
        k = int(np.searchsorted(self.codes[n], code))
        if k < len(self.codes[n]) and self.codes[n][k] == code:
            return k
        return -1

    def _face_index(self, n1: int, face: int) -> np.ndarray:
        """Indices in degree n1-1 of the given face of every n1-chain (-1 for degenerate)."""
        C = self.C
        ch = self.chains[n1]
        if n1 == 1:
            return (C.cod[ch[:, 0]] if face == 0 else C.dom[ch[:, 0]]).astype(np.int64)
        codes = kernels.face_codes(
            np.ascontiguousarray(ch), C.table, C.is_identity.astype(np.bool_), self.base, face, self.normalized
        )
        target = self.codes[n1 - 1]
        idx = np.searchsorted(target, codes)
        idx = np.minimum(idx, max(len(target) - 1, 0))
        ok = (codes >= 0) & (len(target) > 0)
        if len(target):
            ok &= target[idx] == codes
        if np.any((codes >= 0) & ~ok):
            raise AssertionError("face of a chain is missing from the nerve")
        return np.where(ok, idx, -1)

    def _differential(self, n: int) -> SparseMatrix:
        """d: C^n -> C^{n+1}."""
        C, M = self.C, self.M
        n1 = n + 1
        off_src, off_tgt = self.offsets[n], self.offsets[n1]
        D = SparseMatrix(int(off_tgt[-1]), int(off_src[-1]))
        if len(self.chains[n1]) == 0:
            return D
        faces = [self._face_index(n1, i) for i in range(n1 + 1)]
        ch = self.chains[n1]
        for r in range(len(ch)):
            ro = int(off_tgt[r])
            g = int(off_tgt[r + 1]) - ro
            if g == 0:
                continue
            f1 = int(ch[r, 0])
            s = int(faces[0][r])
            co = int(off_src[s])
            Mf = M.maps[f1]
            for a in range(Mf.shape[0]):
                for b in range(Mf.shape[1]):
                    if Mf[a, b]:
                        D.add(ro + a, co + b, int(Mf[a, b]))
            for i in range(1, n1 + 1):
                s = int(faces[i][r])
                if s < 0:
                    continue
                co = int(off_src[s])
                sign = -1 if i % 2 else 1
                for a in range(g):
                    D.add(ro + a, co + a, sign)
        return D

    def cohomology(self, i: int) -> CohomologyGroup:
        return CohomologyGroup(self.complex, i)

    def block(self, n: int, r: int) -> slice:
        return slice(int(self.offsets[n][r]), int(self.offsets[n][r + 1]))


def bar_complex(C: FinCat, M: AbPresheaf, n_max: int, normalized: bool = True) -> BarComplex:
    return BarComplex(C, M, n_max, normalized)


def category_cohomology(C: FinCat, M: AbPresheaf, i: int, use_skeleton: bool = True, normalized: bool = True) -> AbGroup:
    """H^i(C, M); by default computed on a skeleton with restricted coefficients."""
    if i < 0:
        return AbGroup.zero()
    if use_skeleton:
        sk = skeleton(C)
        C, M = sk.cat, restrict(M, sk.inclusion)
    return BarComplex(C, M, i + 1, normalized).cohomology(i).group()


def cochain_map(src: BarComplex, tgt: BarComplex, n: int, functor: FinFunctor, blocks) -> SparseMatrix:
    """Pullback C^n(src) -> C^n(tgt) along ``functor: tgt.C -> src.C`` on chains.

    ``blocks(x)`` is the matrix from src.M(functor(x)) to tgt.M(x) for x in tgt.C.
    """
    out = SparseMatrix(int(tgt.offsets[n][-1]), int(src.offsets[n][-1]))
    ch = tgt.chains[n]
    for r in range(len(ch)):
        if n == 0:
            x = int(ch[r])
            k = src.index_of(0, int(functor.obj_map[x]))
        else:
            x = int(tgt.C.dom[ch[r, 0]])
            k = src.index_of(n, [int(functor.mor_map[f]) for f in ch[r]])
        if k < 0:
            raise AssertionError("functor sends a nondegenerate chain to a degenerate one")
        B = blocks(x)
        ro, co = int(tgt.offsets[n][r]), int(src.offsets[n][k])
        for a in range(B.shape[0]):
            for b in range(B.shape[1]):
                if B[a, b]:
                    out.add(ro + a, co + b, int(B[a, b]))
    return out


def induced_map(H_src: CohomologyGroup, H_tgt: CohomologyGroup, chain_map: SparseMatrix) -> np.ndarray:
    """Matrix of the induced map H_src -> H_tgt in invariant-form coordinates."""
    from .linalg import zeros

    reps = H_src.representatives()
    out = zeros(len(H_tgt.invariants), len(reps))
    for j, v in enumerate(reps):
        w = chain_map.apply(v)
        c = H_tgt.coords(w)
        for i, x in enumerate(c):
            out[i, j] = x
    return out
