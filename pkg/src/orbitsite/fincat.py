"""Finite categories with explicit composition tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import guards, kernels
from .errors import ChainCountGuardExceeded, EmptyObjectSet


class FinCat:
    """A finite category.

    Morphisms are dense ids; ``table[g, f]`` is ``g o f`` (or -1 when
    ``cod(f) != dom(g)``).
    """

    def __init__(self, labels, dom, cod, identities, table, mor_labels=None):
        self.labels = [str(x) for x in labels]
        self.dom = np.asarray(dom, dtype=np.int64)
        self.cod = np.asarray(cod, dtype=np.int64)
        self.identities = np.asarray(identities, dtype=np.int64)
        self.table = np.asarray(table, dtype=np.int64).reshape(len(self.dom), len(self.dom))
        self.mor_labels = [str(x) for x in mor_labels] if mor_labels is not None else [f"m{i}" for i in range(len(self.dom))]

    @classmethod
    def from_compose(cls, labels, morphisms: Sequence[tuple], identities, compose: Callable[[int, int], int]):
        """``morphisms`` is a list of (dom, cod, label); ``compose(g, f)`` returns the id of g o f."""
        n = len(morphisms)
        dom = np.array([m[0] for m in morphisms], dtype=np.int64)
        cod = np.array([m[1] for m in morphisms], dtype=np.int64)
        table = np.full((n, n), -1, dtype=np.int64)
        for f in range(n):
            for g in np.nonzero(dom == cod[f])[0]:
                table[g, f] = compose(int(g), f)
        return cls(labels, dom, cod, identities, table, [m[2] for m in morphisms])

    @property
    def nobj(self) -> int:
        return len(self.labels)

    @property
    def nmor(self) -> int:
        return len(self.dom)

    def compose(self, g: int, f: int) -> int:
        """g o f."""
        r = int(self.table[g, f])
        if r < 0:
            raise ValueError(f"morphisms {g} and {f} are not composable")
        return r

    @cached_property
    def is_identity(self) -> np.ndarray:
        mask = np.zeros(self.nmor, dtype=np.bool_)
        mask[self.identities] = True
        return mask

    @cached_property
    def _homs(self) -> dict:
        h: dict = {}
        for f in range(self.nmor):
            h.setdefault((int(self.dom[f]), int(self.cod[f])), []).append(f)
        return h

    def hom(self, x: int, y: int) -> list[int]:
        return self._homs.get((x, y), [])

    @cached_property
    def _into(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.nobj)]
        for f in range(self.nmor):
            out[int(self.cod[f])].append(f)
        return out

    @cached_property
    def _outof(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.nobj)]
        for f in range(self.nmor):
            out[int(self.dom[f])].append(f)
        return out

    def into(self, x: int) -> list[int]:
        return self._into[x]

    def out_of(self, x: int) -> list[int]:
        return self._outof[x]

    def inverse(self, f: int) -> int | None:
        x, y = int(self.dom[f]), int(self.cod[f])
        idx = int(self.identities[x])
        for g in self.hom(y, x):
            if self.table[g, f] == idx and self.table[f, g] == self.identities[y]:
                return g
        return None

    def is_iso(self, f: int) -> bool:
        return self.inverse(f) is not None

    def __repr__(self):
        return f"FinCat({self.nobj} objects, {self.nmor} morphisms)"

    def __eq__(self, other):
        return (
            isinstance(other, FinCat)
            and self.labels == other.labels
            and np.array_equal(self.dom, other.dom)
            and np.array_equal(self.cod, other.cod)
            and np.array_equal(self.identities, other.identities)
            and np.array_equal(self.table, other.table)
            and self.mor_labels == other.mor_labels
        )

    __hash__ = object.__hash__


def one_object_group_category(G, name="*") -> FinCat:
    """The group G (a PermGroup) as a one-object category; morphism i is element i."""
    n = G.order
    table = np.asarray(G.mul, dtype=np.int64).copy()
    return FinCat([name], np.zeros(n), np.zeros(n), [0], table, [f"g{i}" for i in range(n)])


def discrete_category(n: int) -> FinCat:
    table = np.full((n, n), -1, dtype=np.int64)
    table[np.arange(n), np.arange(n)] = np.arange(n)
    return FinCat([f"x{i}" for i in range(n)], np.arange(n), np.arange(n), np.arange(n), table)


def empty_category() -> FinCat:
    return FinCat([], [], [], [], np.zeros((0, 0)))


@dataclass
class FinFunctor:
    source: FinCat
    target: FinCat
    obj_map: np.ndarray
    mor_map: np.ndarray

    def __post_init__(self):
        self.obj_map = np.asarray(self.obj_map, dtype=np.int64)
        self.mor_map = np.asarray(self.mor_map, dtype=np.int64)

    def validate(self) -> dict:
        S, T = self.source, self.target
        for f in range(S.nmor):
            g = self.mor_map[f]
            if T.dom[g] != self.obj_map[S.dom[f]] or T.cod[g] != self.obj_map[S.cod[f]]:
                return {"ok": False, "kind": "dom/cod", "morphism": f}
        for x in range(S.nobj):
            if self.mor_map[S.identities[x]] != T.identities[self.obj_map[x]]:
                return {"ok": False, "kind": "identity", "object": x}
        g_idx, f_idx = np.nonzero(S.table >= 0)
        lhs = self.mor_map[S.table[g_idx, f_idx]]
        rhs = T.table[self.mor_map[g_idx], self.mor_map[f_idx]]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            k = bad[0]
            return {"ok": False, "kind": "composition", "pair": [int(g_idx[k]), int(f_idx[k])]}
        return {"ok": True}

    def compose(self, other: "FinFunctor") -> "FinFunctor":
        """self after other."""
        return FinFunctor(other.source, self.target, self.obj_map[other.obj_map], self.mor_map[other.mor_map])


def identity_functor(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, np.arange(C.nobj), np.arange(C.nmor))


def validate_category(C: FinCat) -> dict:
    """Exhaustive check of composability, units and associativity.

    Returns ``{"ok": True}`` or ``{"ok": False, "kind": ..., ...witness}``.
    """
    T = C.table
    n = C.nmor
    composable = C.dom[:, None] == C.cod[None, :]  # [g, f]
    defined = T >= 0
    bad = np.argwhere(composable != defined)
    if bad.size:
        g, f = map(int, bad[0])
        return {"ok": False, "kind": "definedness", "pair": [g, f]}
    g_idx, f_idx = np.nonzero(defined)
    gf = T[g_idx, f_idx]
    if np.any((gf < 0) | (gf >= n)):
        k = int(np.nonzero((gf < 0) | (gf >= n))[0][0])
        return {"ok": False, "kind": "range", "pair": [int(g_idx[k]), int(f_idx[k])]}
    wrong = (C.dom[gf] != C.dom[f_idx]) | (C.cod[gf] != C.cod[g_idx])
    if wrong.any():
        k = int(np.nonzero(wrong)[0][0])
        return {"ok": False, "kind": "dom/cod", "pair": [int(g_idx[k]), int(f_idx[k])]}
    for x, i in enumerate(C.identities):
        if C.dom[i] != x or C.cod[i] != x:
            return {"ok": False, "kind": "identity", "object": x}
    f_all = np.arange(n)
    if np.any(T[C.identities[C.cod], f_all] != f_all) or np.any(T[f_all, C.identities[C.dom]] != f_all):
        k = int(np.nonzero((T[C.identities[C.cod], f_all] != f_all) | (T[f_all, C.identities[C.dom]] != f_all))[0][0])
        return {"ok": False, "kind": "unit", "morphism": k}
    # associativity: h o (g o f) == (h o g) o f for all defined triples
    step = max(1, 2_000_000 // max(n, 1))
    for s in range(0, len(g_idx), step):
        gs, fs, gfs = g_idx[s : s + step], f_idx[s : s + step], gf[s : s + step]
        hg = T[:, gs]  # (h, pair)
        ok = hg >= 0
        lhs = T[:, gfs]
        rhs = np.where(ok, T[np.where(ok, hg, 0), fs[None, :]], -1)
        diff = ok & (lhs != rhs)
        if diff.any():
            h, k = np.argwhere(diff)[0]
            return {"ok": False, "kind": "associativity", "triple": [int(h), int(gs[k]), int(fs[k])]}
    return {"ok": True}


def full_subcategory(C: FinCat, objects: Iterable[int]):
    """Full subcategory on ``objects`` (kept in increasing order) and its inclusion."""
    objs = sorted(set(int(x) for x in objects))
    if not objs:
        raise EmptyObjectSet("full subcategory needs at least one object")
    pos = {x: i for i, x in enumerate(objs)}
    keep = [f for f in range(C.nmor) if int(C.dom[f]) in pos and int(C.cod[f]) in pos]
    mpos = np.full(C.nmor, -1, dtype=np.int64)
    mpos[keep] = np.arange(len(keep))
    keep_a = np.array(keep, dtype=np.int64)
    sub_table = C.table[np.ix_(keep_a, keep_a)]
    sub_table = np.where(sub_table >= 0, mpos[np.maximum(sub_table, 0)], -1)
    D = FinCat(
        [C.labels[x] for x in objs],
        [pos[int(C.dom[f])] for f in keep],
        [pos[int(C.cod[f])] for f in keep],
        [int(mpos[C.identities[x]]) for x in objs],
        sub_table,
        [C.mor_labels[f] for f in keep],
    )
    return D, FinFunctor(D, C, np.array(objs, dtype=np.int64), keep_a)


@dataclass
class CommaCategory:
    """alpha/x (``kind="over"``): objects (d, t: alpha(d) -> x).

    ``kind="under"`` gives x/alpha: objects (d, t: x -> alpha(d)).
    ``mor_u[k]`` is the underlying D-morphism of comma morphism k.
    """

    functor: FinFunctor
    apex: int
    kind: str
    objects: list
    cat: FinCat
    mor_u: np.ndarray
    projection: FinFunctor = field(init=False)

    def __post_init__(self):
        self.projection = FinFunctor(
            self.cat,
            self.functor.source,
            np.array([d for d, _ in self.objects], dtype=np.int64),
            self.mor_u,
        )

    @property
    def empty(self) -> bool:
        return not self.objects


def comma_category(alpha: FinFunctor, x: int, kind: str = "over") -> CommaCategory:
    D, C = alpha.source, alpha.target
    objects = []
    for d in range(D.nobj):
        ad = int(alpha.obj_map[d])
        ts = C.hom(ad, x) if kind == "over" else C.hom(x, ad)
        for t in ts:
            objects.append((d, int(t)))
    index = {o: i for i, o in enumerate(objects)}
    by_d: dict = {}
    for i, (d, t) in enumerate(objects):
        by_d.setdefault(d, []).append(i)
    mors = []  # (src, tgt, u)
    for i, (d, t) in enumerate(objects):
        for u in D.out_of(d):
            au = int(alpha.mor_map[u])
            if kind == "over":
                # u: (d, t) -> (d', t') requires t' o alpha(u) = t
                for j in by_d.get(int(D.cod[u]), []):
                    t2 = objects[j][1]
                    if C.table[t2, au] == t:
                        mors.append((i, j, int(u)))
            else:
                # u: (d, t) -> (d', t') requires alpha(u) o t = t'
                t2 = int(C.table[au, t])
                j = index.get((int(D.cod[u]), t2))
                if j is not None:
                    mors.append((i, j, int(u)))
    mindex = {m: k for k, m in enumerate(mors)}
    ids = [mindex[(i, i, int(D.identities[d]))] for i, (d, _) in enumerate(objects)]

    def comp(g, f):
        _, j, u = mors[f]
        _, k, v = mors[g]
        return mindex[(mors[f][0], k, int(D.table[v, u]))]

    labels = [f"({D.labels[d]},{C.mor_labels[t]})" for d, t in objects]
    cat = FinCat.from_compose(labels, [(a, b, D.mor_labels[u]) for a, b, u in mors], ids, comp)
    return CommaCategory(alpha, x, kind, objects, cat, np.array([u for _, _, u in mors], dtype=np.int64))


@dataclass
class Skeleton:
    cat: FinCat
    representatives: list  # skeleton object -> original object
    rep_of: np.ndarray  # original object -> skeleton object index
    transport: np.ndarray  # original object x -> iso x -> rep(x) (original morphism id)
    inclusion: FinFunctor  # skeleton -> C
    retraction: FinFunctor  # C -> skeleton


def skeleton(C: FinCat) -> Skeleton:
    """One object per isomorphism class (minimal index), with equivalence data."""
    rep = list(range(C.nobj))
    transport = [int(C.identities[x]) for x in range(C.nobj)]
    inverse_of: dict = {}
    for x in range(C.nobj):
        for r in range(x):
            if rep[r] != r:
                continue
            isos = [f for f in C.hom(x, r) if C.is_iso(f)]
            if isos:
                rep[x] = r
                transport[x] = min(isos)
                break
    reps = [x for x in range(C.nobj) if rep[x] == x]
    S, inc = full_subcategory(C, reps)
    pos = {x: i for i, x in enumerate(reps)}
    rep_of = np.array([pos[rep[x]] for x in range(C.nobj)], dtype=np.int64)
    inv = [C.inverse(t) for t in transport]
    sub_id = {int(m): k for k, m in enumerate(inc.mor_map)}
    mor_map = np.empty(C.nmor, dtype=np.int64)
    for f in range(C.nmor):
        x, y = int(C.dom[f]), int(C.cod[f])
        # tau_y o f o tau_x^-1
        g = C.table[transport[y], C.table[f, inv[x]]]
        mor_map[f] = sub_id[int(g)]
    retr = FinFunctor(C, S, rep_of, mor_map)
    return Skeleton(S, reps, rep_of, np.array(transport, dtype=np.int64), inc, retr)


# --- nerve ---------------------------------------------------------------

def _out_csr(C: FinCat, normalized: bool):
    ptr = np.zeros(C.nobj + 1, dtype=np.int64)
    idx = []
    for x in range(C.nobj):
        outs = [f for f in C.out_of(x) if not (normalized and C.is_identity[f])]
        idx.extend(outs)
        ptr[x + 1] = ptr[x] + len(outs)
    return ptr, np.array(idx, dtype=np.int64)


def nerve_chains(C: FinCat, n: int, normalized: bool = False) -> np.ndarray:
    """Composable chains (f1, ..., fn), cod(f_i) = dom(f_{i+1}), sorted lexicographically.

    For n = 0 returns the object indices.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    limit = guards.get().max_chains
    if n == 0:
        return np.arange(C.nobj, dtype=np.int64)
    mors = np.array([f for f in range(C.nmor) if not (normalized and C.is_identity[f])], dtype=np.int64)
    chains = mors.reshape(-1, 1)
    ptr, idx = _out_csr(C, normalized)
    for _ in range(n - 1):
        last_cod = np.ascontiguousarray(C.cod[chains[:, -1]])
        total = kernels.extend_count(last_cod, ptr)
        if total > limit:
            raise ChainCountGuardExceeded(f"{total} chains exceed guard {limit}")
        chains = kernels.extend_chains(np.ascontiguousarray(chains), last_cod, ptr, idx)
    if chains.shape[0] > limit:
        raise ChainCountGuardExceeded(f"{chains.shape[0]} chains exceed guard {limit}")
    return chains


def chain_count(C: FinCat, n: int, normalized: bool = False) -> int:
    """Number of n-chains without materializing them (dynamic programming)."""
    if n == 0:
        return C.nobj
    ends = np.zeros(C.nobj, dtype=object)  # chains ending at each object
    for f in range(C.nmor):
        if not (normalized and C.is_identity[f]):
            ends[int(C.cod[f])] += 1
    for _ in range(n - 1):
        new = np.zeros(C.nobj, dtype=object)
        for f in range(C.nmor):
            if not (normalized and C.is_identity[f]):
                new[int(C.cod[f])] += ends[int(C.dom[f])]
        ends = new
    return int(sum(ends))


def is_filtered(C: FinCat) -> bool:
    """Nonempty, cocones on pairs of objects, parallel pairs coequalized."""
    if C.nobj == 0:
        return False
    reach = [set(int(C.cod[f]) for f in C.out_of(x)) for x in range(C.nobj)]
    for a in range(C.nobj):
        for b in range(a + 1, C.nobj):
            if not reach[a] & reach[b]:
                return False
    for x in range(C.nobj):
        for y in range(C.nobj):
            hs = C.hom(x, y)
            for i, f in enumerate(hs):
                for g in hs[i + 1 :]:
                    if not any(C.table[h, f] == C.table[h, g] for h in C.out_of(y)):
                        return False
    return True


# --- JSON codec ----------------------------------------------------------

def fincat_to_dict(C: FinCat) -> dict:
    g_idx, f_idx = np.nonzero(C.table >= 0)
    return {
        "objects": list(C.labels),
        "morphisms": [
            {"id": i, "dom": int(C.dom[i]), "cod": int(C.cod[i]), "label": C.mor_labels[i]} for i in range(C.nmor)
        ],
        "identities": [int(x) for x in C.identities],
        "compose": [[int(g), int(f), int(C.table[g, f])] for g, f in zip(g_idx, f_idx)],
    }


def fincat_from_dict(d: dict) -> FinCat:
    mors = sorted(d["morphisms"], key=lambda m: m["id"])
    n = len(mors)
    table = np.full((n, n), -1, dtype=np.int64)
    for g, f, gf in d["compose"]:
        table[g, f] = gf
    return FinCat(
        d["objects"], [m["dom"] for m in mors], [m["cod"] for m in mors], d["identities"], table, [m["label"] for m in mors]
    )


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
