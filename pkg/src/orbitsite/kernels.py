"""Combinatorial hot loops, each with a numba variant and a numpy variant.

The public functions dispatch on :func:`orbitsite._accel.use_numba`; the
``*_nb`` / ``*_np`` twins are importable for tests and benchmarks.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit, use_numba

# --- nerve chain extension -----------------------------------------------


@njit
def _extend_count_nb(last_cod, out_ptr):
    total = 0
    for i in range(last_cod.shape[0]):
        c = last_cod[i]
        total += out_ptr[c + 1] - out_ptr[c]
    return total


@njit
def _extend_fill_nb(chains, last_cod, out_ptr, out_idx, total):
    n = chains.shape[1]
    res = np.empty((total, n + 1), dtype=np.int64)
    k = 0
    for i in range(chains.shape[0]):
        c = last_cod[i]
        for t in range(out_ptr[c], out_ptr[c + 1]):
            for j in range(n):
                res[k, j] = chains[i, j]
            res[k, n] = out_idx[t]
            k += 1
    return res


def extend_count(last_cod, out_ptr) -> int:
    if use_numba():
        return int(_extend_count_nb(last_cod, out_ptr))
    return int((out_ptr[last_cod + 1] - out_ptr[last_cod]).sum())


def extend_chains_nb(chains, last_cod, out_ptr, out_idx):
    total = _extend_count_nb(last_cod, out_ptr)
    return _extend_fill_nb(chains, last_cod, out_ptr, out_idx, total)


def extend_chains_np(chains, last_cod, out_ptr, out_idx):
    counts = out_ptr[last_cod + 1] - out_ptr[last_cod]
    total = int(counts.sum())
    rows = np.repeat(np.arange(chains.shape[0]), counts)
    # position within each row's out-list
    starts = np.repeat(out_ptr[last_cod], counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    res = np.empty((total, chains.shape[1] + 1), dtype=np.int64)
    res[:, :-1] = chains[rows]
    res[:, -1] = out_idx[starts + offs]
    return res


def extend_chains(chains, last_cod, out_ptr, out_idx):
    """Append every morphism leaving ``last_cod[i]`` to chain i (row-major order kept)."""
    if use_numba():
        return extend_chains_nb(chains, last_cod, out_ptr, out_idx)
    return extend_chains_np(chains, last_cod, out_ptr, out_idx)


# --- face codes ----------------------------------------------------------


@njit
def _face_codes_nb(chains, table, is_identity, base, face, normalized):
    N, n1 = chains.shape
    out = np.empty(N, dtype=np.int64)
    for r in range(N):
        code = 0
        bad = False
        j = 0
        while j < n1:
            if face == 0 and j == 0:
                j += 1
                continue
            if face == n1 and j == n1 - 1:
                j += 1
                continue
            if face > 0 and face < n1 and j == face - 1:
                m = table[chains[r, j + 1], chains[r, j]]
                if normalized and is_identity[m]:
                    bad = True
                code = code * base + m
                j += 2
                continue
            code = code * base + chains[r, j]
            j += 1
        out[r] = -1 if bad else code
    return out


def face_codes_np(chains, table, is_identity, base, face, normalized):
    N, n1 = chains.shape
    if face == 0:
        parts = [chains[:, j] for j in range(1, n1)]
    elif face == n1:
        parts = [chains[:, j] for j in range(0, n1 - 1)]
    else:
        comp = table[chains[:, face], chains[:, face - 1]]
        parts = [chains[:, j] for j in range(face - 1)] + [comp] + [chains[:, j] for j in range(face + 1, n1)]
    code = np.zeros(N, dtype=np.int64)
    for p in parts:
        code = code * base + p
    if normalized and 0 < face < n1:
        code = np.where(is_identity[comp], -1, code)
    return code


def face_codes(chains, table, is_identity, base, face, normalized):
    """Integer codes (base ``base``) of the ``face``-th face of each chain.

    Inner faces whose composite is an identity get -1 when ``normalized``.
    """
    if use_numba():
        return _face_codes_nb(chains, table, is_identity, base, face, normalized)
    return face_codes_np(chains, table, is_identity, base, face, normalized)


def chain_codes(chains, base):
    code = np.zeros(chains.shape[0], dtype=np.int64)
    for j in range(chains.shape[1]):
        code = code * base + chains[:, j]
    return code


# --- unit cocycle enumeration --------------------------------------------


@njit
def _cocycles_nb(nvar, m, cons_ptr, cons_v, cons_a, cons_ca, cons_b, cons_cb, limit):
    """DFS over assignments x in (Z/m)^nvar.

    Constraints attached to variable v only reference variables <= v:
    cv*x[v] + ca*x[a] + cb*x[b] == 0 (mod m); index -1 drops a term.
    """
    out = np.empty((limit, nvar), dtype=np.int64)
    cnt = 0
    x = np.zeros(nvar, dtype=np.int64)
    v = 0
    if nvar == 0:
        return out[:1], 1
    x[0] = -1
    while v >= 0:
        x[v] += 1
        if x[v] >= m:
            x[v] = -1
            v -= 1
            continue
        ok = True
        for t in range(cons_ptr[v], cons_ptr[v + 1]):
            s = cons_v[t] * x[v]
            if cons_a[t] >= 0:
                s += cons_ca[t] * x[cons_a[t]]
            if cons_b[t] >= 0:
                s += cons_cb[t] * x[cons_b[t]]
            if s % m != 0:
                ok = False
                break
        if not ok:
            continue
        if v == nvar - 1:
            if cnt < limit:
                out[cnt, :] = x
            cnt += 1
        else:
            v += 1
            x[v] = -1
    return out[: min(cnt, limit)], cnt


def _cocycles_np(nvar, m, cons_ptr, cons_v, cons_a, cons_ca, cons_b, cons_cb, limit):
    partial = np.zeros((1, 0), dtype=np.int64)
    for v in range(nvar):
        k = partial.shape[0]
        vals = np.tile(np.arange(m, dtype=np.int64), k)
        partial = np.concatenate([np.repeat(partial, m, axis=0), vals[:, None]], axis=1)
        keep = np.ones(partial.shape[0], dtype=bool)
        for t in range(cons_ptr[v], cons_ptr[v + 1]):
            s = cons_v[t] * partial[:, v]
            if cons_a[t] >= 0:
                s = s + cons_ca[t] * partial[:, cons_a[t]]
            if cons_b[t] >= 0:
                s = s + cons_cb[t] * partial[:, cons_b[t]]
            keep &= s % m == 0
        partial = partial[keep]
    return partial[:limit], partial.shape[0]


def pack_constraints(nvar: int, constraints):
    """CSR arrays from a list of {var: coef} dicts (at most three variables each)."""
    per = [[] for _ in range(nvar)]
    for c in constraints:
        c = {k: v for k, v in c.items() if v}
        if not c:
            continue
        if len(c) > 3:
            raise ValueError("constraints may involve at most three variables")
        v = max(c)
        rest = sorted((k, w) for k, w in c.items() if k != v)
        rest += [(-1, 0)] * (2 - len(rest))
        per[v].append((c[v], rest[0][0], rest[0][1], rest[1][0], rest[1][1]))
    ptr = np.zeros(nvar + 1, dtype=np.int64)
    rows = []
    for v in range(nvar):
        rows.extend(per[v])
        ptr[v + 1] = len(rows)
    arr = np.array(rows, dtype=np.int64).reshape(-1, 5)
    return ptr, arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy(), arr[:, 4].copy()


def enumerate_cocycles(nvar, m, constraints, limit=10**7):
    """All x in (Z/m)^nvar satisfying the linear constraints mod m.

    Returns (solutions, count); at most ``limit`` rows are materialized.
    """
    ptr, cv, ca, cca, cb, ccb = pack_constraints(int(nvar), constraints)
    args = (int(nvar), int(m), ptr, cv, ca, cca, cb, ccb, int(limit))
    if use_numba():
        out, cnt = _cocycles_nb(*args)
    else:
        out, cnt = _cocycles_np(*args)
    return np.ascontiguousarray(out), int(cnt)


# --- canonical forms under coboundaries ----------------------------------


@njit
def _canon_nb(cocycles, dom, cod, m, nobj):
    K, E = cocycles.shape
    out = cocycles.copy()
    mu = np.zeros(nobj, dtype=np.int64)
    cand = np.empty(E, dtype=np.int64)
    total = 1
    for _ in range(nobj):
        total *= m
    for r in range(K):
        for j in range(E):
            out[r, j] = cocycles[r, j]
        for t in range(total):
            s = t
            for i in range(nobj):
                mu[i] = s % m
                s //= m
            less = False
            decided = False
            for j in range(E):
                c = (cocycles[r, j] - mu[dom[j]] + mu[cod[j]]) % m
                cand[j] = c
                if not decided:
                    if c < out[r, j]:
                        less = True
                        decided = True
                    elif c > out[r, j]:
                        decided = True
            if less:
                for j in range(E):
                    out[r, j] = cand[j]
    return out


def _canon_np(cocycles, dom, cod, m, nobj):
    grids = np.indices((m,) * nobj).reshape(nobj, -1).T if nobj else np.zeros((1, 0), dtype=np.int64)
    shift = (grids[:, cod] - grids[:, dom]) % m  # (T, E)
    out = np.empty_like(cocycles)
    for r in range(cocycles.shape[0]):
        orbit = (cocycles[r][None, :] + shift) % m
        order = np.lexsort(orbit.T[::-1])
        out[r] = orbit[order[0]]
    return out


def canonical_forms(cocycles, dom, cod, m, nobj):
    """Lexicographically minimal representative of each row under coboundaries."""
    cocycles = np.ascontiguousarray(cocycles, dtype=np.int64)
    dom = np.asarray(dom, dtype=np.int64)
    cod = np.asarray(cod, dtype=np.int64)
    if cocycles.shape[1] == 0:
        return cocycles.copy()
    if use_numba():
        return _canon_nb(cocycles, dom, cod, int(m), int(nobj))
    return _canon_np(cocycles, dom, cod, int(m), int(nobj))
