"""Invertible presheaves of rank one over O_p°(G), written additively.

A unit-valued presheaf with one-dimensional values is the same thing as a
1-cocycle lambda: Mor -> Z/m (m = q - 1) with lambda(id) = 0 and
lambda(g o f) = lambda(g) + lambda(f).  Isomorphism classes are cocycles
modulo coboundaries mu(cod) - mu(dom).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import guards, kernels
from .abelian import AbGroup
from .cohomology import category_cohomology
from .errors import EnumerationGuardExceeded, GuardExceeded, NotInvertible, WellDefinednessFailure
from .fincat import FinCat, skeleton
from .groups import PermGroup, group_from_spec
from .orbit import orbit_category, orbit_inclusion
from .presheaves import AbPresheaf


# --- cocycles ---------------------------------------------------------------

def composition_constraints(C: FinCat, variables: list[int]) -> list[dict]:
    """Linear constraints lambda(g o f) - lambda(g) - lambda(f) = 0 on the given variables.

    Morphisms outside ``variables`` must be identities (scalar 0).
    """
    pos = {f: i for i, f in enumerate(variables)}
    out = []
    for g in variables:
        for f in C.into(int(C.dom[g])):
            f = int(f)
            if C.is_identity[f]:
                continue
            h = int(C.table[g, f])
            c: dict = {}
            for var, coef in ((h, 1), (g, -1), (f, -1)):
                if var in pos:
                    c[pos[var]] = c.get(pos[var], 0) + coef
            out.append(c)
    return out


@dataclass
class UnitCocycle:
    base: FinCat
    m: int
    scalars: np.ndarray  # per morphism, additive in Z/m

    def __post_init__(self):
        self.scalars = np.asarray(self.scalars, dtype=np.int64) % max(self.m, 1)

    def is_cocycle(self) -> bool:
        C, s, m = self.base, self.scalars, self.m
        if np.any(s[C.identities] % m):
            return False
        g_idx, f_idx = np.nonzero(C.table >= 0)
        return bool(np.all((s[C.table[g_idx, f_idx]] - s[g_idx] - s[f_idx]) % m == 0))

    def canonical(self) -> tuple:
        """Lexicographically minimal scalar vector in the coboundary orbit."""
        row = kernels.canonical_forms(self.scalars[None, :], self.base.dom, self.base.cod, self.m, self.base.nobj)
        return tuple(int(v) for v in row[0])

    def cohomologous(self, other: "UnitCocycle") -> bool:
        return self.canonical() == other.canonical()

    def to_presheaf(self) -> "LinePresheaf":
        return LinePresheaf(self.base, self.m, [1] * self.base.nobj, [int(v) for v in self.scalars])


def dual(lam: UnitCocycle) -> UnitCocycle:
    """Pointwise dual: inverse scalars, i.e. negation."""
    return UnitCocycle(lam.base, lam.m, -lam.scalars)


def tensor(a: UnitCocycle, b: UnitCocycle) -> UnitCocycle:
    if a.m != b.m or a.base is not b.base:
        raise ValueError("tensor needs cocycles on the same base with the same unit group")
    return UnitCocycle(a.base, a.m, a.scalars + b.scalars)


def trivial_cocycle(C: FinCat, m: int) -> UnitCocycle:
    return UnitCocycle(C, m, np.zeros(C.nmor, dtype=np.int64))


@dataclass
class LinePresheaf:
    """Presheaf of F_q-vector spaces given by dimensions and scalar maps.

    ``scalars[f]`` is the discrete log of a nonzero scalar, or None for the
    zero map; only dimensions 0 and 1 are representable.
    """

    base: FinCat
    m: int
    dims: list
    scalars: list

    def is_functorial(self) -> bool:
        C = self.base
        for x in range(C.nobj):
            i = int(C.identities[x])
            if self.dims[x] and (self.scalars[i] is None or self.scalars[i] % self.m):
                return False
        g_idx, f_idx = np.nonzero(C.table >= 0)
        for g, f in zip(g_idx, f_idx):
            if not (self.dims[int(C.dom[f])] and self.dims[int(C.cod[g])]):
                continue
            h = int(C.table[g, f])
            a, b, c = self.scalars[int(g)], self.scalars[int(f)], self.scalars[h]
            if a is None or b is None:
                if c is not None:
                    return False
            elif c is None or (c - a - b) % self.m:
                return False
        return True

    def to_cocycle(self) -> UnitCocycle:
        if not is_invertible(self):
            raise NotInvertible("presheaf is not invertible")
        return UnitCocycle(self.base, self.m, [int(s) for s in self.scalars])


def is_invertible(F: LinePresheaf) -> bool:
    """Every value one-dimensional and every structure map an isomorphism (and F a presheaf)."""
    if any(d != 1 for d in F.dims):
        return False
    if any(s is None for s in F.scalars):
        return False
    return F.is_functorial()


# --- finite abelian groups from element orders ----------------------------------

def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariants_from_orders(orders: list[int]) -> list[int]:
    """Invariant factors of a finite abelian group from the multiset of element orders."""
    N = len(orders)
    if N <= 1:
        return []
    per_prime = {}
    for p in _prime_factors(N):
        counts = [1]
        k = 1
        while counts[-1] < N and k < 64:
            counts.append(sum(1 for o in orders if (p**k) % o == 0))
            k += 1
        ranks = []
        for a, b in zip(counts, counts[1:]):
            r, x = 0, b // a
            while x > 1:
                x //= p
                r += 1
            ranks.append(r)  # number of cyclic p-factors of order >= p^k
        exps = []
        for k, r in enumerate(ranks):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            exps += [k + 1] * (r - nxt)
        per_prime[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in per_prime.values())
    invs = []
    for i in range(width):
        d = 1
        for p, e in per_prime.items():
            if i < len(e):
                d *= p ** e[i]
        invs.append(d)
    return sorted(invs)


# --- brute force ------------------------------------------------------------------

@dataclass
class BruteForcePic:
    base: FinCat
    m: int
    variables: list  # morphism ids carrying free scalars
    classes: list  # canonical scalar vectors (over all morphisms of base)
    cocycle_count: int
    invariants: list = field(default_factory=list)
    table: np.ndarray | None = None  # Cayley table of class addition

    @property
    def order(self) -> int:
        return len(self.classes)

    def group(self) -> AbGroup:
        return AbGroup.from_invariants(self.invariants)

    def class_of(self, lam: UnitCocycle) -> int:
        return self.classes.index(lam.canonical())


def pic_bruteforce(C: FinCat, m: int, use_skeleton: bool = True) -> BruteForcePic:
    """Enumerate every scalar assignment, keep cocycles, identify classes."""
    if m < 1:
        raise ValueError("unit group order must be positive")
    base = skeleton(C).cat if use_skeleton else C
    variables = [f for f in range(base.nmor) if not base.is_identity[f]]
    limit = guards.get().max_enumeration
    if m > 1 and float(m) ** len(variables) > limit:
        raise EnumerationGuardExceeded(f"{m}^{len(variables)} assignments exceed guard {limit}")
    cons = composition_constraints(base, variables)
    _, count = kernels.enumerate_cocycles(len(variables), m, cons, limit=1)
    sols, count = kernels.enumerate_cocycles(len(variables), m, cons, limit=max(count, 1))
    full = np.zeros((sols.shape[0], base.nmor), dtype=np.int64)
    if variables:
        full[:, variables] = sols
    if float(count) * float(m) ** base.nobj > limit:
        raise EnumerationGuardExceeded("coboundary orbit enumeration exceeds guard")
    canon = kernels.canonical_forms(full, base.dom, base.cod, m, base.nobj)
    classes = sorted(set(tuple(int(v) for v in row) for row in canon))
    index = {c: i for i, c in enumerate(classes)}
    k = len(classes)
    reps = np.array(classes, dtype=np.int64).reshape(k, base.nmor)
    sums = (reps[:, None, :] + reps[None, :, :]).reshape(k * k, base.nmor) % m
    sum_canon = kernels.canonical_forms(sums, base.dom, base.cod, m, base.nobj)
    table = np.array([index[tuple(int(v) for v in row)] for row in sum_canon], dtype=np.int64).reshape(k, k)
    zero = index[tuple([0] * base.nmor)]
    orders = []
    for a in range(k):
        o, x = 1, a
        while x != zero:
            x = int(table[x, a])
            o += 1
        orders.append(o)
    return BruteForcePic(base, m, variables, classes, count, invariants_from_orders(orders), table)


# --- characters -------------------------------------------------------------------

def characters(G: PermGroup, n: int) -> list[np.ndarray]:
    """All homomorphisms G -> Z/n, as value arrays over the element indices."""
    gens = [G.index[tuple(g)] for g in G.generators] if G.generators else []
    out = []
    for vals in itertools.product(range(n), repeat=len(gens)):
        chi = np.full(G.order, -1, dtype=np.int64)
        chi[0] = 0
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for a in frontier:
                for g, v in zip(gens, vals):
                    b = int(G.mul[a, g])
                    w = (chi[a] + v) % n
                    if chi[b] < 0:
                        chi[b] = w
                        nxt.append(b)
                    elif chi[b] != w:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok and np.all(chi >= 0):
            # homomorphism check on all pairs
            if np.all((chi[G.mul] - chi[:, None] - chi[None, :]) % n == 0):
                out.append(chi)
    uniq = {tuple(c): c for c in out}
    return [uniq[k] for k in sorted(uniq)]


@dataclass
class CharacterEmbedding:
    m: int
    characters: list
    cocycles: list  # UnitCocycle per character (None when ill-defined)
    classes: list  # canonical forms
    ill_defined: list  # indices of characters not vanishing on the objects' subgroups
    injective: bool
    homomorphism: bool

    @property
    def image_order(self) -> int:
        return len(set(c for c in self.classes if c is not None))


def character_embedding(G, p: int, q: int, use_skeleton: bool = True, strict: bool = False) -> CharacterEmbedding:
    """chi -> the cocycle lambda(g: G/H -> G/K) = chi(g) on O_p°(G)."""
    m = q - 1
    O = orbit_category(G, p, "p-nontrivial")
    Gp = O.group
    if use_skeleton:
        sk = skeleton(O)
        base, mor = sk.cat, sk.inclusion.mor_map
    else:
        base, mor = O, np.arange(O.nmor)
    chis = characters(Gp, m) if m > 0 else []
    cocycles, classes, bad = [], [], []
    for k, chi in enumerate(chis):
        if any(np.any(chi[list(H.elements)] % m) for H in O.object_subgroup):
            bad.append(k)
            cocycles.append(None)
            classes.append(None)
            continue
        lam = UnitCocycle(base, m, chi[O.morphism_coset[mor]])
        if not lam.is_cocycle():
            raise AssertionError("character cocycle fails the cocycle identity")
        cocycles.append(lam)
        classes.append(lam.canonical())
    if bad and strict:
        raise WellDefinednessFailure(f"{len(bad)} characters do not vanish on the p-subgroups")
    good = [k for k in range(len(chis)) if classes[k] is not None]
    injective = len(set(classes[k] for k in good)) == len(good)
    lookup = {tuple(chis[k]): k for k in good}
    hom = True
    for a in good:
        for b in good:
            s = tuple(int(v) for v in (chis[a] + chis[b]) % m)
            c = lookup.get(s)
            if c is None:
                continue
            if tensor(cocycles[a], cocycles[b]).canonical() != classes[c]:
                hom = False
    return CharacterEmbedding(m, chis, cocycles, classes, bad, injective, hom)


# --- the three paths -----------------------------------------------------------------

def h1_units(G, p: int, q: int) -> AbGroup:
    """H^1(O_p°(G), Z/(q-1)) through the bar complex."""
    O = orbit_category(G, p, "p-nontrivial")
    return category_cohomology(O, AbPresheaf.constant(O, [q - 1]), 1)


def units_sheaf(G, p: int, q: int):
    """G_m: right Kan extension of the constant Z/(q-1) from O_p°(G) to O(G)."""
    from .kan import right_kan

    O = orbit_category(G)
    D = orbit_category(O.group, p, "p-nontrivial")
    return right_kan(AbPresheaf.constant(D, [q - 1]), orbit_inclusion(D, O)), O


def cech_units(G, p: int, q: int) -> AbGroup:
    """H^1 of the minimal sipp sieve on G/G with coefficients G_m (Ext engine)."""
    from .resolution import cech_cohomology
    from .sites import sipp_topology

    Gm, O = units_sheaf(G, p, q)
    T = sipp_topology(O, p)
    top = O.nobj - 1  # G/G is the last object
    return cech_cohomology(top, Gm, T, 1)


def sylow_trivial_group(G, p: int, q: int, paths=("bar", "cech_ext", "bruteforce")) -> dict:
    """Compute T(G, P) several ways and compare."""
    G = group_from_spec(G)
    out: dict = {"group": G.name, "p": int(p), "q": int(q), "paths": {}, "notices": []}
    timings = {}
    if "bar" in paths:
        t = time.perf_counter()
        out["paths"]["bar"] = h1_units(G, p, q).invariants
        timings["bar"] = time.perf_counter() - t
    if "cech_ext" in paths:
        t = time.perf_counter()
        out["paths"]["cech_ext"] = cech_units(G, p, q).invariants
        timings["cech_ext"] = time.perf_counter() - t
    if "bruteforce" in paths:
        t = time.perf_counter()
        try:
            O = orbit_category(G, p, "p-nontrivial")
            out["paths"]["bruteforce"] = pic_bruteforce(O, q - 1).invariants
        except GuardExceeded as e:
            out["notices"].append(f"bruteforce skipped: {e}")
        timings["bruteforce"] = time.perf_counter() - t
    vals = list(out["paths"].values())
    out["agree"] = all(v == vals[0] for v in vals)
    out["invariant_factors"] = vals[0] if vals else None
    emb = character_embedding(G, p, q)
    out["character_image_order"] = emb.image_order
    out["runtime_ms"] = {k: round(v * 1000, 3) for k, v in timings.items()}
    return out
