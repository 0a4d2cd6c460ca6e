"""Exact integer linear algebra.

Everything here works on Python ints (arbitrary precision).  Matrices are
accepted as nested lists or numpy arrays and returned as numpy ``object``
arrays.  Vectors act as columns: a map Z^n -> Z^m is an m x n matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import guards
from .errors import MatrixGuardExceeded


def as_rows(A) -> list[list[int]]:
    if isinstance(A, np.ndarray):
        if A.ndim != 2:
            raise ValueError("expected a 2-d matrix")
        return [[int(x) for x in row] for row in A.tolist()]
    return [[int(x) for x in row] for row in A]


def obj_matrix(rows, m: int | None = None, n: int | None = None) -> np.ndarray:
    """Build an object-dtype integer matrix (keeps the shape for empty inputs)."""
    rows = [list(r) for r in rows]
    if m is None:
        m = len(rows)
    if n is None:
        n = len(rows[0]) if rows else 0
    out = np.zeros((m, n), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = int(v)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return A.dot(B)


def _check_size(m: int, n: int):
    g = guards.get().max_matrix
    if m > g or n > g:
        raise MatrixGuardExceeded(f"dense matrix {m}x{n} exceeds guard {g}")


# --- Smith normal form ---------------------------------------------------

def _snf_core(A: list[list[int]], m: int, n: int, transforms: bool):
    """In-place SNF; returns (D, U, Uinv, V) with U A V = D (lists)."""
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    Ui = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        if transforms:
            U[i], U[k] = U[k], U[i]
            for row in Ui:
                row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        if transforms:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def row_sub(i, t, q):  # row i -= q * row t
        ri, rt = A[i], A[t]
        for j in range(n):
            if rt[j]:
                ri[j] -= q * rt[j]
        if transforms:
            ui, ut = U[i], U[t]
            for j in range(m):
                if ut[j]:
                    ui[j] -= q * ut[j]
            for row in Ui:
                if row[i]:
                    row[t] += q * row[i]

    def col_sub(j, t, q):  # col j -= q * col t
        for row in A:
            if row[t]:
                row[j] -= q * row[t]
        if transforms:
            for row in V:
                if row[t]:
                    row[j] -= q * row[t]

    def row_add(t, i):  # row t += row i
        row_sub(t, i, -1)

    t = 0
    while t < min(m, n):
        best, bi, bj = 0, -1, -1
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best == 0 or abs(v) < best):
                    best, bi, bj = abs(v), i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if best == 0:
            break
        swap_rows(t, bi)
        swap_cols(t, bj)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    row_sub(i, t, A[i][t] // p)
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    col_sub(j, t, A[t][j] // p)
                    if A[t][j]:
                        clean = False
            if not clean:
                best, bi, bj = abs(p), t, t
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < best:
                        best, bi, bj = abs(A[i][t]), i, t
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < best:
                        best, bi, bj = abs(A[t][j]), t, j
                swap_rows(t, bi)
                swap_cols(t, bj)
                continue
            bad = -1
            if abs(p) != 1:
                for i in range(t + 1, m):
                    row = A[i]
                    for j in range(t + 1, n):
                        if row[j] % p:
                            bad = i
                            break
                    if bad >= 0:
                        break
            if bad >= 0:
                row_add(t, bad)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if transforms:
                U[t] = [-x for x in U[t]]
                for row in Ui:
                    row[t] = -row[t]
        t += 1
    return A, U, Ui, V


def smith_normal_form(A):
    """Return (U, D, V) with U @ A @ V == D, U and V unimodular.

    The diagonal of D is nonnegative and each entry divides the next.
    """
    rows = as_rows(A)
    m = len(rows)
    n = len(rows[0]) if rows else (np.asarray(A).shape[1] if isinstance(A, np.ndarray) else 0)
    _check_size(m, n)
    D, U, _, V = _snf_core(rows, m, n, True)
    return obj_matrix(U, m, m), obj_matrix(D, m, n), obj_matrix(V, n, n)


def snf_diagonal(A) -> list[int]:
    rows = as_rows(A)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    D, *_ = _snf_core(rows, m, n, False)
    return [D[i][i] for i in range(min(m, n))]


def invariant_factors_of_cokernel(A, nrows: int | None = None) -> list[int]:
    """Invariant factors of Z^m / A Z^n; torsion ascending then 0 for free parts, 1s dropped."""
    rows = as_rows(A)
    m = len(rows) if nrows is None else nrows
    qm = QuotientModule(m, [[rows[i][j] for i in range(m)] for j in range(len(rows[0]) if rows else 0)])
    return qm.invariants


# --- sparse elimination --------------------------------------------------

class _Elim:
    """Sparse integer row reduction with optional tracked combinations.

    ``rows`` are dicts col -> value.  ``aug`` (optional) are dicts tracking
    the same integer combinations.  ``order="column"`` pivots left to right,
    producing a row-echelon basis; ``order="markowitz"`` picks low-fill pivots.
    """

    def __init__(self, rows: list[dict], aug: list[dict] | None = None):
        self.rows = rows
        self.aug = aug
        self.active = set(i for i, r in enumerate(rows) if r)
        self.colidx: dict[int, set] = {}
        for i in self.active:
            for c in rows[i]:
                self.colidx.setdefault(c, set()).add(i)
        self.pivots: list[tuple[int, int]] = []  # (row, col)

    def _sub(self, i: int, k: int, q: int):
        """row i -= q * row k."""
        ri, rk = self.rows[i], self.rows[k]
        for c, v in rk.items():
            nv = ri.get(c, 0) - q * v
            if nv:
                if c not in ri:
                    self.colidx.setdefault(c, set()).add(i)
                ri[c] = nv
            elif c in ri:
                del ri[c]
                self.colidx[c].discard(i)
        if self.aug is not None:
            ai, ak = self.aug[i], self.aug[k]
            for c, v in ak.items():
                nv = ai.get(c, 0) - q * v
                if nv:
                    ai[c] = nv
                else:
                    ai.pop(c, None)

    def _clear_column(self, c: int, prefer_short: bool) -> int:
        """Reduce column c until one active row has it; return that row."""
        while True:
            cand = self.colidx.get(c)
            if not cand:
                return -1
            if len(cand) == 1:
                return next(iter(cand))
            if prefer_short:
                k = min(cand, key=lambda r: (abs(self.rows[r][c]), len(self.rows[r]), r))
            else:
                k = min(cand, key=lambda r: (abs(self.rows[r][c]), r))
            p = self.rows[k][c]
            for i in list(cand):
                if i != k:
                    self._sub(i, k, self.rows[i][c] // p)

    def _retire(self, r: int, c: int):
        self.pivots.append((r, c))
        self.active.discard(r)
        for cc in self.rows[r]:
            s = self.colidx.get(cc)
            if s is not None:
                s.discard(r)

    def run_column_order(self):
        while True:
            live = [c for c, s in self.colidx.items() if s]
            if not live:
                break
            c = min(live)
            r = self._clear_column(c, prefer_short=False)
            if self.rows[r][c] < 0:
                self._negate(r)
            self._retire(r, c)
        return self

    def run_markowitz(self):
        """Pivot on sparse columns first; columns are re-sorted once per batch."""
        while True:
            live = sorted((len(s), c) for c, s in self.colidx.items() if s)
            if not live:
                break
            batch = live[: max(64, len(live) // 8)]
            for cnt, c in batch:
                s = self.colidx.get(c)
                if not s or len(s) > 2 * cnt + 1:
                    continue
                r = self._clear_column(c, prefer_short=True)
                self._retire(r, c)
            for c in [c for c, s in self.colidx.items() if not s]:
                del self.colidx[c]
        return self

    def _negate(self, r: int):
        self.rows[r] = {c: -v for c, v in self.rows[r].items()}
        if self.aug is not None:
            self.aug[r] = {c: -v for c, v in self.aug[r].items()}

    def zero_rows(self) -> list[int]:
        piv = {r for r, _ in self.pivots}
        return [i for i in range(len(self.rows)) if i not in piv and not self.rows[i]]


def _to_dict(v: Sequence[int]) -> dict:
    return {i: int(x) for i, x in enumerate(v) if x}


def _from_dict(d: dict, n: int) -> list[int]:
    out = [0] * n
    for i, x in d.items():
        out[i] = x
    return out


# --- lattices ------------------------------------------------------------

class Lattice:
    """A sublattice of Z^n kept as a row-echelon basis.

    ``basis`` is a list of dicts; pivots are strictly increasing and positive.
    """

    def __init__(self, n: int, generators: Iterable, reduce: bool = True):
        self.n = n
        rows = [g if isinstance(g, dict) else _to_dict(g) for g in generators]
        rows = [dict(r) for r in rows if r]
        el = _Elim(rows).run_column_order()
        piv = sorted(el.pivots, key=lambda rc: rc[1])
        self.basis = [el.rows[r] for r, _ in piv]
        self.pivot_cols = [c for _, c in piv]
        if reduce:
            self._reduce_above()

    def _reduce_above(self):
        for k, (row, c) in enumerate(zip(self.basis, self.pivot_cols)):
            p = row[c]
            for j in range(k):
                other = self.basis[j]
                v = other.get(c, 0)
                if v:
                    q = v // p
                    if q:
                        for cc, vv in row.items():
                            nv = other.get(cc, 0) - q * vv
                            if nv:
                                other[cc] = nv
                            else:
                                other.pop(cc, None)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, v) -> list[int] | None:
        """Integer coordinates of v in the basis, or None if v is not in the lattice."""
        w = dict(v) if isinstance(v, dict) else _to_dict(v)
        out = []
        for row, c in zip(self.basis, self.pivot_cols):
            x = w.get(c, 0)
            p = row[c]
            if x % p:
                return None
            q = x // p
            out.append(q)
            if q:
                for cc, vv in row.items():
                    nv = w.get(cc, 0) - q * vv
                    if nv:
                        w[cc] = nv
                    else:
                        w.pop(cc, None)
        if w:
            return None
        return out

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def vector(self, coeffs: Sequence[int]) -> list[int]:
        out = [0] * self.n
        for q, row in zip(coeffs, self.basis):
            if q:
                for c, v in row.items():
                    out[c] += q * v
        return out

    def matrix(self) -> np.ndarray:
        """Basis as columns of an n x rank matrix."""
        M = zeros(self.n, self.rank)
        for k, row in enumerate(self.basis):
            for c, v in row.items():
                M[c, k] = v
        return M


def hermite_normal_form(A) -> np.ndarray:
    """Row-style HNF: nonzero rows of the echelon basis of the row lattice of A."""
    rows = as_rows(A)
    n = len(rows[0]) if rows else 0
    L = Lattice(n, rows)
    return obj_matrix([_from_dict(r, n) for r in L.basis], L.rank, n)


def kernel_basis(A) -> np.ndarray:
    """Columns form a basis of {x : A x = 0}, in column-echelon form."""
    rows = as_rows(A)
    m = len(rows)
    n = len(rows[0]) if rows else (np.asarray(A).shape[1] if isinstance(A, np.ndarray) else 0)
    return kernel_lattice([[rows[i][j] for i in range(m)] for j in range(n)], n).matrix()


def kernel_lattice(columns: list, nvars: int, extra_columns: list | None = None) -> Lattice:
    """Lattice of x in Z^nvars with sum x_j columns[j] in span(extra_columns).

    ``columns`` and ``extra_columns`` are vectors (list or dict) in a common
    ambient space.  The extra columns act as relations whose coefficients are
    projected away.
    """
    rows = [c if isinstance(c, dict) else _to_dict(c) for c in columns]
    rows = [dict(r) for r in rows]
    aug = [{j: 1} for j in range(nvars)]
    for c in extra_columns or []:
        rows.append(dict(c) if isinstance(c, dict) else _to_dict(c))
        aug.append({})
    el = _Elim(rows, aug).run_markowitz()
    gens = [aug[i] for i in el.zero_rows() if aug[i]]
    return Lattice(nvars, gens)


# --- solving -------------------------------------------------------------

@dataclass
class NoSolution:
    """Certificate: ``row @ A`` is divisible by ``modulus`` while ``row @ b`` is not
    (modulus 0 means ``row @ A == 0`` and ``row @ b != 0``)."""

    row: list[int]
    modulus: int


def solve_integer(A, b):
    """Solve A x = b over Z.

    Returns a list (the solution whose coordinates at the kernel-HNF pivots are
    centered residues) or a :class:`NoSolution` certificate.
    """
    rows = as_rows(A)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    b = [int(x) for x in b]
    if len(b) != m:
        raise ValueError("length of b does not match A")
    D, U, _, V = _snf_core([r[:] for r in rows], m, n, True)
    Ub = [sum(U[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if Ub[i] != 0:
                return NoSolution(U[i][:], 0)
        else:
            if Ub[i] % d:
                return NoSolution(U[i][:], d)
            y[i] = Ub[i] // d
    x = [sum(V[j][k] * y[k] for k in range(n)) for j in range(n)]
    K = kernel_lattice([[rows[i][j] for i in range(m)] for j in range(n)], n)
    for row, c in zip(K.basis, K.pivot_cols):
        p = row[c]
        r = x[c] % p
        if 2 * r > p:
            r -= p
        q = (x[c] - r) // p
        if q:
            for cc, vv in row.items():
                x[cc] -= q * vv
    return x


# --- quotient modules ----------------------------------------------------

class QuotientModule:
    """Z^n / span(relations), with coordinates in invariant-factor form.

    Unit pivots are eliminated sparsely first (recording substitutions); the
    remaining core goes through dense SNF.  ``invariants`` lists the nontrivial
    invariant factors, torsion ascending then zeros for free summands.
    ``coords(v)`` maps a vector of Z^n to its coordinates (reduced mod the
    invariants), ``lifts`` holds one representative vector per invariant.
    """

    def __init__(self, n: int, relations: Iterable):
        self.n = n
        rels = [dict(r) if isinstance(r, dict) else _to_dict(r) for r in relations]
        rels = [r for r in rels if r]
        self.subs: list[tuple[int, dict]] = []  # e_i == expr (over later generators)
        alive = set(range(n))
        # index generator -> relations containing it
        gidx: dict[int, set] = {}
        for k, r in enumerate(rels):
            for g in r:
                gidx.setdefault(g, set()).add(k)
        live_rels = set(k for k in range(len(rels)))
        while True:
            best = None
            for k in live_rels:
                r = rels[k]
                for g, v in r.items():
                    if v == 1 or v == -1:
                        cost = (len(r) - 1) * (len(gidx[g]) - 1)
                        if best is None or cost < best[0]:
                            best = (cost, k, g)
                            if cost == 0:
                                break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                break
            _, k, g = best
            r = rels[k]
            s = r[g]
            # e_g = -s * sum_{h != g} r[h] e_h
            expr = {h: -s * v for h, v in r.items() if h != g}
            self.subs.append((g, expr))
            alive.discard(g)
            live_rels.discard(k)
            for h in r:
                gidx[h].discard(k)
            for kk in list(gidx.get(g, ())):
                rr = rels[kk]
                c = rr.pop(g)
                for h, v in expr.items():
                    nv = rr.get(h, 0) + c * v
                    if nv:
                        if h not in rr:
                            gidx.setdefault(h, set()).add(kk)
                        rr[h] = nv
                    else:
                        if h in rr:
                            del rr[h]
                            gidx[h].discard(kk)
                if not rr:
                    live_rels.discard(kk)
            gidx.pop(g, None)
        self.core = sorted(alive)
        pos = {g: i for i, g in enumerate(self.core)}
        core_rels = [rels[k] for k in sorted(live_rels)]
        # drop duplicates cheaply; prune with a row-echelon pass when large
        m = len(self.core)
        if core_rels and (len(core_rels) > m or m > 32):
            # a reduced echelon basis is often diagonal already
            L = Lattice(n, core_rels, reduce=m > 32)
            core_rels = L.basis
        entries = self._split_isolated(core_rels, pos, m)
        if entries is None:
            entries = self._dense_snf(core_rels, pos, list(range(m)), m)
        else:
            entries.sort(key=lambda e: (e[0] == 0, e[0]))
            tors = [d for d, _, _ in entries if d]
            if any(b % a for a, b in zip(tors, tors[1:])):
                entries = self._dense_snf(core_rels, pos, list(range(m)), m)
        self.invariants = [d for d, _, _ in entries]
        self._U = [u for _, u, _ in entries]
        self._lifts = [v for _, _, v in entries]

    def _split_isolated(self, core_rels, pos, m):
        """Peel off generators whose only relation is a multiple of themselves.

        Returns (d, U row, lift) triples for d != 1, or None when nothing splits.
        """
        touch: dict[int, list] = {}
        for j, r in enumerate(core_rels):
            for g in r:
                touch.setdefault(g, []).append(j)
        iso = {}
        for g in self.core:
            js = touch.get(g, [])
            if not js:
                iso[g] = 0
            elif len(js) == 1 and len(core_rels[js[0]]) == 1:
                iso[g] = abs(core_rels[js[0]][g])
        if not iso:
            return None
        entries = []
        for g, d in iso.items():
            if d != 1:
                u = [0] * m
                u[pos[g]] = 1
                v = [0] * self.n
                v[g] = 1
                entries.append((d, u, v))
        rest = [g for g in self.core if g not in iso]
        if rest:
            rels = [r for r in core_rels if not (len(r) == 1 and next(iter(r)) in iso)]
            entries += self._dense_snf(rels, pos, [pos[g] for g in rest], m)
        return entries

    def _dense_snf(self, rels, pos, rows, m):
        """SNF on the core positions ``rows``; returns (d, U row over all m, lift) triples."""
        k = len(rows)
        local = {r: i for i, r in enumerate(rows)}
        _check_size(k, len(rels))
        R = [[0] * len(rels) for _ in range(k)]
        for j, r in enumerate(rels):
            for g, v in r.items():
                R[local[pos[g]]][j] = v
        D, U, Ui, _ = _snf_core(R, k, len(rels), True)
        diag = [D[i][i] if i < len(rels) else 0 for i in range(k)]
        keep = [i for i in range(k) if diag[i] != 1]
        order = [i for i in keep if diag[i] != 0] + [i for i in keep if diag[i] == 0]
        out = []
        for i in order:
            u = [0] * m
            for a in range(k):
                if U[i][a]:
                    u[rows[a]] = U[i][a]
            v = [0] * self.n
            for a in range(k):
                if Ui[a][i]:
                    v[self.core[rows[a]]] = Ui[a][i]
            out.append((diag[i], u, v))
        return out

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def lifts(self) -> list[list[int]]:
        return [v[:] for v in self._lifts]

    def reduce_vec(self, v: Sequence[int]) -> list[int]:
        """Expand a vector of Z^n in terms of the core generators."""
        w = list(int(x) for x in v)
        for g, expr in self.subs:
            x = w[g]
            if x:
                w[g] = 0
                for h, c in expr.items():
                    w[h] += x * c
        return w

    def coords(self, v: Sequence[int], reduce: bool = True) -> list[int]:
        w = self.reduce_vec(v)
        core = [w[g] for g in self.core]
        out = []
        for row, d in zip(self._U, self.invariants):
            x = sum(a * b for a, b in zip(row, core) if a and b)
            out.append(x % d if (reduce and d) else x)
        return out

    def is_zero(self, v) -> bool:
        return all(c == 0 for c in self.coords(v))


class SparseMatrix:
    """An m x n integer matrix stored as a list of column dicts."""

    def __init__(self, m: int, n: int, cols: list[dict] | None = None):
        self.shape = (m, n)
        self.cols = cols if cols is not None else [dict() for _ in range(n)]

    def add(self, i: int, j: int, v: int):
        if v:
            c = self.cols[j]
            nv = c.get(i, 0) + v
            if nv:
                c[i] = nv
            else:
                c.pop(i, None)

    def column(self, j: int) -> dict:
        return self.cols[j]

    def apply(self, v: Sequence[int]) -> list[int]:
        out = [0] * self.shape[0]
        for j, x in enumerate(v):
            if x:
                for i, a in self.cols[j].items():
                    out[i] += a * x
        return out

    def dense(self) -> np.ndarray:
        M = zeros(*self.shape)
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                M[i, j] = v
        return M

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)


def columns_of(M) -> list[dict]:
    """Column dicts of a dense or sparse matrix."""
    if isinstance(M, SparseMatrix):
        return [dict(c) for c in M.cols]
    M = np.asarray(M, dtype=object)
    return [_to_dict(M[:, j]) for j in range(M.shape[1])]


def sparse_compose(A, B) -> SparseMatrix:
    """A @ B for dense or sparse operands."""
    Ac = columns_of(A)
    Bc = columns_of(B)
    m = A.shape[0]
    out = SparseMatrix(m, len(Bc))
    for j, col in enumerate(Bc):
        acc: dict = {}
        for k, x in col.items():
            for i, a in Ac[k].items():
                acc[i] = acc.get(i, 0) + a * x
        out.cols[j] = {i: v for i, v in acc.items() if v}
    return out
