"""The default (group, p, q) battery and seeded pseudo-random coefficient presheaves."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

import numpy as np

from .abelian import AbGroup
from .linalg import obj_matrix
from .orbit import OrbitCategory, orbit_category
from .picard import characters
from .presheaves import AbPresheaf

DEFAULT_BATTERY = (
    ("S3", 3, (3, 4, 5)),
    ("C4", 2, (3, 5)),
    ("Q8", 2, (3, 5)),
    ("D8", 2, (3, 5)),
    ("A4", 2, (3, 4, 7)),
    ("S4", 2, (3, 5)),
    ("S4", 3, (4, 7)),
    ("A4", 3, (4, 7)),
)

MAX_CYCLIC = 12


@dataclass(frozen=True)
class Case:
    group: str
    p: int
    q: int

    @property
    def label(self) -> str:
        return f"{self.group}/p={self.p}/q={self.q}"


def battery_cases(spec=DEFAULT_BATTERY) -> list[Case]:
    return [Case(g, int(p), int(q)) for g, p, qs in spec for q in qs]


def parse_battery(text: str) -> list[Case]:
    """'S3:3:3,4,5;A4:2:4' -> cases."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        g, p, qs = part.split(":")
        out += [Case(g.strip(), int(p), int(q)) for q in qs.split(",")]
    return out


def seed_for(*parts) -> int:
    h = hashlib.sha256("|".join(str(x) for x in parts).encode()).digest()
    return int.from_bytes(h[:8], "big")


def _level(O: OrbitCategory, x: int, p: int) -> int:
    n, k = O.object_subgroup[x].order, 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _modulus_chain(rng: random.Random, levels: int) -> list[int]:
    """m_0 | m_1 | ... with every entry at most MAX_CYCLIC."""
    m = rng.choice([1, 2, 2, 3, 4, 5, 6])
    chain = [m]
    for _ in range(levels - 1):
        mult = [k for k in (1, 2, 3) if m * k <= MAX_CYCLIC]
        m *= rng.choice(mult)
        chain.append(m)
    return chain


def random_presheaf(O: OrbitCategory, p: int, seed: int) -> AbPresheaf:
    """A cyclic-valued presheaf on an orbit category of p-subgroups.

    Two shapes: reduction maps Z/m_y -> Z/m_x (moduli growing with the
    subgroup) optionally twisted by a character, or multiplication maps
    Z/m_y -> Z/m_x by m_x/m_y (moduli shrinking with the subgroup).
    """
    rng = random.Random(seed)
    lv = [_level(O, x, p) for x in range(O.nobj)]
    lo, hi = min(lv), max(lv)
    chain = _modulus_chain(rng, hi - lo + 1)
    kind = rng.choice(["reduction", "inclusion"])
    if kind == "inclusion":
        chain = chain[::-1]
    mods = [chain[lv[x] - lo] for x in range(O.nobj)]
    twist = None
    if kind == "reduction" and rng.random() < 0.6:
        # sign-type twist by a character trivial on every object's subgroup
        chis = [c for c in characters(O.group, 2) if np.any(c)]
        chis = [c for c in chis if all(not np.any(c[list(H.elements)]) for H in O.object_subgroup)]
        if chis:
            twist = chis[rng.randrange(len(chis))]
    values = [AbGroup.from_invariants([m]) for m in mods]
    maps = []
    for f in range(O.nmor):
        x, y = int(O.dom[f]), int(O.cod[f])
        if kind == "reduction":
            s = 1
            if twist is not None and twist[int(O.morphism_coset[f])]:
                s = -1
        else:
            s = mods[x] // mods[y]
        maps.append(obj_matrix([[s]], 1, 1))
    return AbPresheaf(O, values, maps)


def coefficient_battery(case: Case, O: OrbitCategory | None = None, count: int = 2) -> list[tuple[str, AbPresheaf]]:
    """Constant Z/(q-1) plus ``count`` seeded random presheaves on O_p°(G)."""
    O = O or orbit_category(case.group, case.p, "p-nontrivial")
    out = [("constant", AbPresheaf.constant(O, [case.q - 1]))]
    for k in range(count):
        out.append((f"random{k}", random_presheaf(O, case.p, seed_for(case.group, case.p, case.q, k))))
    return out
