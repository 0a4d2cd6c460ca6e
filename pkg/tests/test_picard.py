import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbitsite.errors import EmptyCategory, EnumerationGuardExceeded, NotInvertible
from orbitsite.fincat import one_object_group_category, skeleton
from orbitsite.groups import group_from_spec
from orbitsite.orbit import orbit_category
from orbitsite.picard import (
    LinePresheaf,
    UnitCocycle,
    character_embedding,
    characters,
    dual,
    h1_units,
    invariants_from_orders,
    is_invertible,
    pic_bruteforce,
    sylow_trivial_group,
    tensor,
    trivial_cocycle,
)

from oracles import h1_order_constant, homs_cyclic


@pytest.mark.parametrize("G,p,q,want", [("S3", 3, 3, [2]), ("S3", 3, 4, []), ("S3", 3, 5, [2]), ("A4", 2, 4, [3])])
def test_h1_units(G, p, q, want):
    assert h1_units(G, p, q).invariants == want


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_h1_units_p_group(q):
    assert h1_units("Q8", 2, q).is_trivial()


def test_h1_units_empty():
    with pytest.raises(EmptyCategory):
        h1_units("S3", 5, 3)


def test_bruteforce_c2():
    C = one_object_group_category(group_from_spec("C2"))
    P = pic_bruteforce(C, 2)
    assert P.order == 2
    assert P.cocycle_count == 2
    assert P.invariants == [2]


def test_bruteforce_trivial_units():
    C = orbit_category("A4", 2, "p-nontrivial")
    assert pic_bruteforce(C, 1).order == 1


def test_bruteforce_a4():
    C = orbit_category("A4", 2, "p-nontrivial")
    P = pic_bruteforce(C, 3)
    assert P.order == h1_units("A4", 2, 4).order() == 3
    assert P.order == h1_order_constant(skeleton(C).cat, 3)


@pytest.mark.parametrize("G,p,m", [("S3", 3, 2), ("S3", 3, 4), ("C4", 2, 2), ("A4", 3, 2), ("S3", 3, 6)])
def test_bruteforce_skeleton_matches_full(G, p, m):
    C = orbit_category(G, p, "p-nontrivial")
    a = pic_bruteforce(C, m)
    b = pic_bruteforce(C, m, use_skeleton=False)
    assert a.invariants == b.invariants


def test_bruteforce_guard():
    C = orbit_category("S4", 2, "p-nontrivial")
    with pytest.raises(EnumerationGuardExceeded):
        pic_bruteforce(C, 4)


def test_bruteforce_rejects_bad_m():
    C = orbit_category("S3", 3, "p-nontrivial")
    with pytest.raises(ValueError):
        pic_bruteforce(C, 0)


def test_invariants_from_orders():
    assert invariants_from_orders([1, 2, 2, 2]) == [2, 2]
    assert invariants_from_orders([1, 6, 3, 2, 3, 6]) == [6]
    assert invariants_from_orders([1, 2, 2, 2, 4, 4, 4, 4]) == [2, 4]
    assert invariants_from_orders([1]) == []


def tiny_category():
    return skeleton(orbit_category("A4", 2, "p-nontrivial")).cat


def test_cocycle_iff_invertible_exhaustive():
    C = one_object_group_category(group_from_spec("C2"))
    m = 2
    for vals in itertools.product(range(m), repeat=C.nmor):
        lam = UnitCocycle(C, m, list(vals))
        F = LinePresheaf(C, m, [1] * C.nobj, list(vals))
        assert lam.is_cocycle() == is_invertible(F)


def test_cocycle_iff_invertible_skeleton():
    C = tiny_category()
    m = 3
    free = [f for f in range(C.nmor) if not C.is_identity[f]]
    seen = 0
    for vals in itertools.product(range(m), repeat=len(free)):
        s = [0] * C.nmor
        for f, v in zip(free, vals):
            s[f] = v
        lam = UnitCocycle(C, m, s)
        assert lam.is_cocycle() == is_invertible(LinePresheaf(C, m, [1] * C.nobj, s))
        seen += lam.is_cocycle()
    assert seen > 0


def test_trivial_cocycle_self_dual():
    C = tiny_category()
    t = trivial_cocycle(C, 3)
    assert is_invertible(t.to_presheaf())
    assert dual(t).cohomologous(t)


def test_zero_map_not_invertible():
    C = tiny_category()
    F = trivial_cocycle(C, 3).to_presheaf()
    f = next(f for f in range(C.nmor) if not C.is_identity[f])
    F.scalars[f] = None
    assert not is_invertible(F)
    with pytest.raises(NotInvertible):
        F.to_cocycle()


def test_dimension_two_not_invertible():
    C = tiny_category()
    F = trivial_cocycle(C, 3).to_presheaf()
    F.dims[0] = 2
    assert not is_invertible(F)


def _pic(G="A4", p=2, m=3):
    return pic_bruteforce(orbit_category(G, p, "p-nontrivial"), m)


@given(st.data())
def test_pic_is_a_group(data):
    P = _pic()
    C = P.base
    a = data.draw(st.integers(0, P.order - 1))
    b = data.draw(st.integers(0, P.order - 1))
    la = UnitCocycle(C, P.m, list(P.classes[a]))
    lb = UnitCocycle(C, P.m, list(P.classes[b]))
    # tensor is well defined on classes: shift a representative by a coboundary
    mu = np.array(data.draw(st.lists(st.integers(0, P.m - 1), min_size=C.nobj, max_size=C.nobj)))
    la2 = UnitCocycle(C, P.m, la.scalars - mu[C.dom] + mu[C.cod])
    assert la2.is_cocycle() and la2.cohomologous(la)
    assert tensor(la, lb).cohomologous(tensor(la2, lb))
    assert P.class_of(tensor(la, lb)) == int(P.table[a, b])
    assert tensor(la, dual(la)).cohomologous(trivial_cocycle(C, P.m))


def test_tensor_needs_same_base():
    a = trivial_cocycle(tiny_category(), 3)
    with pytest.raises(ValueError):
        tensor(a, UnitCocycle(a.base, 2, a.scalars))
    with pytest.raises(ValueError):
        tensor(a, trivial_cocycle(tiny_category(), 3))
    assert tensor(a, trivial_cocycle(a.base, 3)).cohomologous(a)


@pytest.mark.parametrize("G", ["S3", "A4", "S4", "D8", "Q8", "C4"])
@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_characters_count(G, n):
    grp = group_from_spec(G)
    chis = characters(grp, n)
    assert len(chis) == homs_cyclic(grp, n)
    for chi in chis:
        assert np.all((chi[grp.mul] - chi[:, None] - chi[None, :]) % n == 0)


def test_character_embedding_s3():
    E = character_embedding("S3", 3, 3)
    assert len(E.characters) == 2
    assert E.injective and E.homomorphism
    assert E.image_order == 2
    trivial = [k for k, c in enumerate(E.characters) if not np.any(c)][0]
    assert E.cocycles[trivial].cohomologous(trivial_cocycle(E.cocycles[trivial].base, 2))


def test_character_embedding_a4():
    E = character_embedding("A4", 2, 4)
    assert len(E.characters) == 3
    assert E.injective and E.homomorphism and E.image_order == 3


def test_character_embedding_reports_ill_defined():
    # q = 5: characters S3 -> Z/4 restrict nontrivially to no 3-subgroup, so all are fine
    E = character_embedding("S3", 3, 5)
    assert E.ill_defined == []
    # D8 -> Z/2 characters need not vanish on the 2-subgroups
    E = character_embedding("D8", 2, 3)
    assert len(E.ill_defined) == 3
    assert E.image_order == 1


@pytest.mark.parametrize("G,p,q,want", [("S3", 3, 3, [2]), ("A4", 2, 4, [3]), ("C3", 3, 4, []), ("C5", 5, 11, [])])
def test_sylow_trivial_group(G, p, q, want):
    r = sylow_trivial_group(G, p, q)
    assert r["agree"]
    assert set(r["paths"]) == {"bar", "cech_ext", "bruteforce"}
    assert r["invariant_factors"] == want


def test_sylow_trivial_group_guard_notice():
    r = sylow_trivial_group("S4", 2, 5)
    assert "bruteforce" not in r["paths"]
    assert r["notices"] and r["agree"]
    assert r["invariant_factors"] == []
