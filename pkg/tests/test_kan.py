import pytest

from orbitsite.battery import Case, coefficient_battery
from orbitsite.abelian import is_isomorphism
from orbitsite.fincat import full_subcategory, identity_functor
from orbitsite.kan import (
    RightKan,
    derived_right_kan,
    left_kan_counit,
    left_kan_on_map,
    left_kan_set,
    left_kan_unit,
    right_kan,
    right_kan_counit,
    right_kan_on_map,
    right_kan_unit,
)
from orbitsite.orbit import orbit_category, orbit_inclusion
from orbitsite.presheaves import AbPresheaf, SetPresheaf, restrict
from orbitsite.sites import is_sheaf, sipp_topology


def s3_inclusion(variant="all"):
    D = orbit_category("S3", 3, "p-nontrivial")
    C = orbit_category("S3", 3, variant)
    return D, C, orbit_inclusion(D, C)


def test_restrict_identity():
    D, _, _ = s3_inclusion()
    M = AbPresheaf.constant(D, [2])
    R = restrict(M, identity_functor(D))
    assert R.invariants() == M.invariants()


def test_restrict_units_sheaf_is_constant():
    D, _, iota = s3_inclusion()
    Gm = right_kan(AbPresheaf.constant(D, [2]), iota)
    R = restrict(Gm, iota)
    assert R.invariants() == [[2]] * D.nobj


@pytest.mark.parametrize("q", [3, 4, 5])
def test_right_kan_s3_values(q):
    D, C, iota = s3_inclusion()
    R = right_kan(AbPresheaf.constant(D, [q - 1]), iota)
    assert [H.order for H in C.object_subgroup] == [1, 2, 2, 2, 3, 6]
    assert R.invariants() == [[], [], [], [], [q - 1], [q - 1]]
    assert R.validate()["ok"]


def test_right_kan_identity():
    D, _, _ = s3_inclusion()
    M = AbPresheaf.constant(D, [4])
    assert right_kan(M, identity_functor(D)).invariants() == [[4]] * D.nobj


def _battery_inputs():
    out = []
    for case in (Case("S3", 3, 5), Case("A4", 2, 4), Case("D8", 2, 3)):
        for name, M in coefficient_battery(case):
            out.append(pytest.param(case, M, id=f"{case.label}/{name}"))
    return out


@pytest.mark.parametrize("case,M", _battery_inputs())
def test_right_kan_adjunction(case, M):
    D = M.base
    C = orbit_category(case.group)
    iota = orbit_inclusion(D, C)
    rk = RightKan(M, iota)
    R = rk.presheaf
    assert R.validate()["ok"]
    # fully faithful inclusion: the counit is an isomorphism
    eps = right_kan_counit(M, iota, rk)
    assert eps.is_natural()
    assert [is_isomorphism(eps.at(d)) for d in range(D.nobj)] == [True] * D.nobj
    # triangle identities
    eta = right_kan_unit(R, iota)
    assert eta.is_natural()
    rk_res = RightKan(restrict(R, iota), iota)
    eta = right_kan_unit(R, iota, rk_res)
    eps_R = right_kan_on_map(right_kan_counit(M, iota, rk), iota, rk_res, rk)
    assert eps_R.compose(eta).is_identity()
    res_eta = type(eta)(restrict(R, iota), restrict(rk_res.presheaf, iota), [eta.components[int(x)] for x in iota.obj_map])
    eps_res = right_kan_counit(restrict(R, iota), iota, rk_res)
    assert eps_res.compose(res_eta).is_identity()
    # and the extension is a sipp sheaf
    assert is_sheaf(R, sipp_topology(C, case.p)).ok


def test_set_right_kan_values():
    D, C, iota = s3_inclusion()
    R = right_kan(SetPresheaf.constant(D, 3), iota)
    # empty comma over G/1 and G/C2: a singleton (empty limit)
    assert R.sizes == [1, 1, 1, 1, 3, 3]
    assert R.validate()["ok"]


def test_set_right_kan_triangles():
    D, C, iota = s3_inclusion()
    N = SetPresheaf.constant(C, 2)
    eta = right_kan_unit(N, iota)
    assert eta.is_natural()
    M = SetPresheaf.constant(D, 2)
    eps = right_kan_counit(M, iota)
    assert eps.is_natural()
    assert eps.is_identity()


def test_left_kan_identity_and_singleton():
    D, C, iota = s3_inclusion()
    M = SetPresheaf.constant(D, 3)
    assert left_kan_set(M, identity_functor(D)).sizes == M.sizes
    one = SetPresheaf.constant(C, 1)
    assert left_kan_set(one, identity_functor(C)).sizes == [1] * C.nobj


def test_left_kan_example():
    C = orbit_category("S3", 3, "p-subgroups")
    assert [H.order for H in C.object_subgroup] == [1, 3]
    D, inc = full_subcategory(C, [1])
    L = left_kan_set(SetPresheaf.constant(D, 1), inc)
    assert L.sizes == [1, 1]
    assert L.validate()["ok"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_left_kan_triangles(n):
    D, C, iota = s3_inclusion("p-subgroups")
    M = SetPresheaf.constant(D, n)
    lk = left_kan_unit(M, iota)
    assert lk.is_natural()
    N = SetPresheaf.constant(C, n)
    eps = left_kan_counit(N, iota)
    assert eps.is_natural()
    # epsilon_{LK M} o LK(eta_M) = id
    from orbitsite.kan import LeftKanSet

    L = LeftKanSet(M, iota)
    eta = left_kan_unit(M, iota, L)
    L2 = LeftKanSet(restrict(L.presheaf, iota), iota)
    lk_eta = left_kan_on_map(eta, iota, L, L2)
    eps_L = left_kan_counit(L.presheaf, iota, L2)
    assert eps_L.compose(lk_eta).is_identity()


def test_derived_right_kan_degree_zero():
    D, C, iota = s3_inclusion()
    M = AbPresheaf.constant(D, [2])
    assert derived_right_kan(M, iota, 0).invariants() == right_kan(M, iota).invariants()


def test_derived_right_kan_vanishes():
    D, C, iota = s3_inclusion("p-subgroups")
    M = AbPresheaf.constant(D, [2])
    R1 = derived_right_kan(M, iota, 1)
    assert R1.is_zero()
    assert derived_right_kan(M, iota, 0).invariants() == [[], [2]]


def test_derived_right_kan_objects_restriction():
    D = orbit_category("A4", 2, "p-nontrivial")
    O = orbit_category("A4")
    iota = orbit_inclusion(D, O)
    M = AbPresheaf.constant(D, [3])
    full = derived_right_kan(M, iota, 1)
    some = [0, O.nobj - 1]
    part = derived_right_kan(M, iota, 1, objects=some)
    assert part.invariants() == [full.invariants()[x] for x in some]


def test_derived_right_kan_negative_degree():
    D, C, iota = s3_inclusion()
    with pytest.raises(ValueError):
        derived_right_kan(AbPresheaf.constant(D, [2]), iota, -1)


def test_derived_right_kan_normalized_agrees():
    D = orbit_category("C4", 2, "p-nontrivial")
    O = orbit_category("C4")
    iota = orbit_inclusion(D, O)
    M = AbPresheaf.constant(D, [2])
    for j in (0, 1):
        a = derived_right_kan(M, iota, j).invariants()
        b = derived_right_kan(M, iota, j, normalized=False).invariants()
        assert a == b
