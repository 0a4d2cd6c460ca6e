"""Finite permutation groups and their subgroup lattices."""

from __future__ import annotations

import re
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import guards
from .errors import (
    MalformedDescriptor,
    MalformedPermutation,
    NotASubgroupPair,
    OrderGuardExceeded,
)

Perm = tuple  # tuple of images: p[i] is the image of point i


def _check_perm(p: Sequence[int], degree: int) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise MalformedPermutation(f"not a permutation of {degree} points: {p}")
    return p


def parse_cycles(text: str, degree: int | None = None) -> Perm:
    """Parse cycle notation like ``(0 1 2)(3 4)``; points are 0-based."""
    text = text.strip()
    if text in ("", "()", "e", "1"):
        return tuple(range(degree or 1))
    if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+", text):
        raise MalformedPermutation(f"bad cycle notation: {text!r}")
    cycles = [[int(x) for x in re.split(r"[\s,]+", c.strip())] for c in re.findall(r"\(([^)]*)\)", text)]
    top = max(max(c) for c in cycles) + 1
    n = degree if degree is not None else top
    if top > n:
        raise MalformedPermutation(f"point {top - 1} exceeds degree {n}")
    img = list(range(n))
    seen = set()
    for c in cycles:
        if len(set(c)) != len(c) or seen & set(c):
            raise MalformedPermutation(f"repeated point in {text!r}")
        seen |= set(c)
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return tuple(img)


def perm_to_cycles(p: Perm) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


class PermGroup:
    """A permutation group on points ``0..degree-1`` with enumerated elements.

    Elements are sorted lexicographically by image tuple, so index 0 is the
    identity. Products follow ``(a*b)(i) = a(b(i))``.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]], name: str | None = None):
        g = guards.get()
        if degree < 1:
            raise MalformedPermutation("degree must be positive")
        if degree > g.max_degree:
            raise OrderGuardExceeded(f"degree {degree} exceeds guard {g.max_degree}")
        self.degree = degree
        self.generators = tuple(_check_perm(p, degree) for p in generators)
        self.name = name
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for s in self.generators:
                    b = tuple(s[a[i]] for i in range(degree))
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
                        if len(seen) > g.max_order:
                            raise OrderGuardExceeded(f"group order exceeds guard {g.max_order}")
            frontier = nxt
        self.elements = tuple(sorted(seen))
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        arr = np.array(self.elements, dtype=np.int64).reshape(n, degree)
        # mul[a, b] = index of a*b, where (a*b)(i) = a(b(i))
        prod = arr[:, arr]  # prod[a, b, i] = arr[a, arr[b, i]]
        keys = {e: i for i, e in enumerate(self.elements)}
        self.mul = np.array([[keys[tuple(row)] for row in prod[a]] for a in range(n)], dtype=np.int64)
        self.inv = np.argmin(self.mul, axis=1).astype(np.int64)  # a*b == 0 (identity)
        assert np.all(self.mul[np.arange(n), self.inv] == 0)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"PermGroup({self.name or '?'}, order={self.order})"

    def element_index(self, perm: Sequence[int]) -> int:
        return self.index[tuple(perm)]

    def conj(self, g: int, h: int) -> int:
        """g^-1 h g."""
        return int(self.mul[self.mul[self.inv[g], h], g])

    def closure(self, gens: Iterable[int]) -> int:
        """Bitset of the subgroup generated by element indices ``gens``."""
        gens = [int(x) for x in gens if x != 0]
        members = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for s in gens:
                    b = int(self.mul[a, s])
                    if b not in members:
                        members.add(b)
                        nxt.append(b)
            frontier = nxt
        return _bits(members)

    @cached_property
    def subgroups(self) -> tuple["Subgroup", ...]:
        return all_subgroups(self)

    @cached_property
    def _subgroup_by_bits(self) -> dict:
        return {s.members: s for s in self.subgroups}

    def subgroup(self, members) -> "Subgroup":
        """Look up the canonical Subgroup for a bitset or an iterable of indices."""
        bits = members if isinstance(members, int) else _bits(members)
        try:
            return self._subgroup_by_bits[bits]
        except KeyError:
            raise NotASubgroupPair("not a subgroup") from None

    def generated(self, perms: Iterable) -> "Subgroup":
        idx = [p if isinstance(p, (int, np.integer)) else self.element_index(p) for p in perms]
        return self.subgroup(self.closure(idx))

    @property
    def trivial(self) -> "Subgroup":
        return self.subgroups[0]

    @property
    def whole(self) -> "Subgroup":
        return self.subgroups[-1]

    def descriptor(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "generators": [list(p) for p in self.generators],
        }


def _bits(indices: Iterable[int]) -> int:
    b = 0
    for i in indices:
        b |= 1 << int(i)
    return b


def _members_of(bits: int) -> tuple[int, ...]:
    out, i = [], 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


class Subgroup:
    __slots__ = ("parent", "members", "canonical_id", "elements", "__weakref__")

    def __init__(self, parent: PermGroup, members: int, canonical_id: int = -1):
        self.parent = parent
        self.members = members
        self.canonical_id = canonical_id
        self.elements = _members_of(members)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return bool(self.members >> int(g) & 1)

    def __le__(self, other: "Subgroup") -> bool:
        return self.members & other.members == self.members

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent is other.parent and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"Subgroup(id={self.canonical_id}, order={self.order})"

    def conjugate(self, g: int) -> int:
        """Bitset of g^-1 H g."""
        G = self.parent
        return _bits(G.conj(g, h) for h in self.elements)

    def label(self) -> str:
        return f"H{self.canonical_id}"


def all_subgroups(G: PermGroup) -> tuple[Subgroup, ...]:
    """All subgroups, by cyclic extension, sorted by (order, members)."""
    cyclic = {}
    for g in range(G.order):
        cyclic.setdefault(G.closure([g]), g)
    found = set(cyclic)
    frontier = list(cyclic)
    cyc_items = list(cyclic.items())
    while frontier:
        nxt = []
        for h in frontier:
            hm = _members_of(h)
            for cbits, g in cyc_items:
                if cbits & h == cbits:
                    continue
                j = G.closure(list(_generators_hint(G, hm)) + [g])
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    ordered = sorted(found, key=lambda b: (bin(b).count("1"), _members_of(b)))
    return tuple(Subgroup(G, b, i) for i, b in enumerate(ordered))


def _generators_hint(G: PermGroup, members: Sequence[int]) -> list[int]:
    """A small generating set for the subgroup with the given members."""
    gens, cur = [], 1
    for m in members:
        if not (cur >> m) & 1:
            gens.append(m)
            cur = G.closure(gens)
    return gens


def _prime_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def sylow_subgroup(H: Subgroup, p: int) -> Subgroup:
    """Sylow p-subgroup of H with minimal canonical id."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    target = _prime_part(H.order, p)
    for K in H.parent.subgroups:
        if K.order == target and K <= H:
            return K
    raise AssertionError("Sylow subgroup not found")  # pragma: no cover


def sylow_subgroups(H: Subgroup, p: int) -> list[Subgroup]:
    target = _prime_part(H.order, p)
    return [K for K in H.parent.subgroups if K.order == target and K <= H]


def normalizer(H: Subgroup) -> Subgroup:
    G = H.parent
    return G.subgroup([g for g in range(G.order) if H.conjugate(g) == H.members])


def p_part_coprime_index(H: Subgroup, K: Subgroup, p: int) -> bool:
    if not K <= H:
        raise NotASubgroupPair("K is not contained in H")
    return (H.order // K.order) % p != 0


def is_p_group(H: Subgroup, p: int) -> bool:
    return _prime_part(H.order, p) == H.order


# --- descriptors ---------------------------------------------------------

def _cyclic(n):
    return n, [tuple(list(range(1, n)) + [0])] if n > 1 else []


def _symmetric(n):
    if n < 2:
        return max(n, 1), []
    return n, [tuple(list(range(1, n)) + [0]), tuple([1, 0] + list(range(2, n)))]


def _alternating(n):
    if n < 3:
        return max(n, 1), []
    gens = []
    for i in range(2, n):
        gens.append(parse_cycles(f"(0 1 {i})", n))
    return n, gens


def _dihedral_ngon(n):
    if n == 1:
        return 2, [(1, 0)]
    if n == 2:
        return _klein()
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return n, [rot, ref]


def _klein():
    return 4, [(1, 0, 3, 2), (2, 3, 0, 1)]


def _quaternion():
    # Q8 = {+-1, +-i, +-j, +-k}; index = 2*unit + sign, unit in (1, i, j, k)
    table = {  # unit product: (sign, unit)
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }

    def left(a):  # left multiplication by element a on all 8 points
        ua, sa = divmod(a, 2)
        img = []
        for b in range(8):
            ub, sb = divmod(b, 2)
            s, u = table[(ua, ub)]
            img.append(2 * u + (s ^ sa ^ sb))
        return tuple(img)

    return 8, [left(2), left(4)]  # i and j


_LONG = {
    "cyclic": _cyclic,
    "symmetric": _symmetric,
    "alternating": _alternating,
    "dihedral": _dihedral_ngon,
}


def _parse_factor(text: str):
    t = text.strip().lower()
    m = re.fullmatch(r"(cyclic|symmetric|alternating|dihedral)\s+(\d+)", t)
    if m:
        return _LONG[m.group(1)](int(m.group(2)))
    if t in ("quaternion 8", "quaternion", "q8"):
        return _quaternion()
    if t in ("klein four", "klein", "v4"):
        return _klein()
    m = re.fullmatch(r"([csad])(\d+)", t)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "d":
            if n % 2 or n < 2:
                raise MalformedDescriptor(f"dihedral order must be even: {text!r}")
            return _dihedral_ngon(n // 2)
        return {"c": _cyclic, "s": _symmetric, "a": _alternating}[kind](n)
    raise MalformedDescriptor(f"unknown group descriptor {text!r}")


def _parse_explicit(text: str):
    m = re.fullmatch(r"\s*gens(?:\[(\d+)\])?\s*:\s*(.*)", text, flags=re.S)
    body = m.group(2) if m else text
    degree = int(m.group(1)) if m and m.group(1) else None
    parts = [p.strip() for p in re.split(r"\)\s*,\s*\(|\)\s*;\s*\(", body.strip())]
    # re-attach the parentheses removed by the split
    items = []
    for k, p in enumerate(parts):
        if k > 0:
            p = "(" + p
        if k < len(parts) - 1:
            p = p + ")"
        items.append(p)
    if degree is None:
        nums = [int(x) for x in re.findall(r"\d+", body)]
        degree = max(nums) + 1 if nums else 1
    return degree, [parse_cycles(p, degree) for p in items if p not in ("", "()")]


def group_from_spec(spec) -> PermGroup:
    """Build a group from a descriptor.

    Accepted forms: ``"cyclic n"``, ``"dihedral n"`` (n-gon, order 2n),
    ``"symmetric n"``, ``"alternating n"``, ``"quaternion 8"``, ``"klein four"``,
    short names ``Cn Sn An Dm Q8 V4`` (``Dm`` has order m), direct products
    joined by ``" x "``, explicit generators ``"gens[4]: (0 1 2 3), (0 2)"``,
    or a dict ``{"degree": n, "generators": [[images], ...]}``.
    """
    if isinstance(spec, PermGroup):
        return spec
    if isinstance(spec, dict):
        gens = spec.get("generators", [])
        return PermGroup(int(spec["degree"]), gens, name=spec.get("name"))
    if not isinstance(spec, str) or not spec.strip():
        raise MalformedDescriptor(f"bad group descriptor {spec!r}")
    text = spec.strip()
    G = _CACHE.get(text)
    if G is not None:
        g = guards.get()
        if G.order > g.max_order or G.degree > g.max_degree:
            raise OrderGuardExceeded(f"group {text!r} exceeds guards")
        return G
    G = _build(text)
    _CACHE[text] = G
    return G


_CACHE: dict = {}


def _build(text: str) -> PermGroup:
    if "(" in text:
        degree, gens = _parse_explicit(text)
        return PermGroup(degree, gens, name=text)
    factors = [_parse_factor(f) for f in re.split(r"\s+x\s+", text)]
    degree = 0
    gens = []
    total = sum(d for d, _ in factors)
    for d, fg in factors:
        for p in fg:
            img = list(range(total))
            for i in range(d):
                img[degree + i] = degree + p[i]
            gens.append(tuple(img))
        degree += d
    return PermGroup(degree, gens, name=text)
