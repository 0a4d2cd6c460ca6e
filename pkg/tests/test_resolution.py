import pytest

from orbitsite.battery import Case, coefficient_battery
from orbitsite.cohomology import category_cohomology
from orbitsite.fincat import one_object_group_category
from orbitsite.groups import group_from_spec
from orbitsite.orbit import orbit_category, orbit_inclusion
from orbitsite.picard import units_sheaf
from orbitsite.kan import right_kan
from orbitsite.presheaves import AbPresheaf
from orbitsite.resolution import (
    cech_cohomology,
    ext_groups,
    ext_over_category,
    resolve_by_representables,
    ses_quotient,
    z_constant,
    z_linearize,
)
from orbitsite.sites import NatGroup, maximal_sieve, minimal_topology, sipp_topology


def s3_sipp():
    O = orbit_category("S3")
    return O, sipp_topology(O, 3)


def representable(C, x):
    return z_linearize(C, maximal_sieve(C, x))


def test_min_sieve_linearization_s3():
    O, T = s3_sipp()
    ZS = z_linearize(O, T.min_sieve(O.nobj - 1))
    assert [H.order for H in O.object_subgroup] == [1, 2, 2, 2, 3, 6]
    assert ZS.invariants() == [[0], [], [], [], [0], []]
    assert ZS.validate()["ok"]


def test_ses_quotient_s3():
    O, T = s3_sipp()
    ses = ses_quotient(O, T.min_sieve(O.nobj - 1))
    assert ses.exact
    assert ses.quotient.invariants() == [[], [0], [0], [0], [], [0]]
    assert ses.whole.invariants() == [[0]] * O.nobj
    assert ses.quotient.validate()["ok"]


@pytest.mark.parametrize("G,p", [("S3", 3), ("A4", 2), ("D8", 2), ("S4", 3)])
def test_ses_quotient_exact(G, p):
    O = orbit_category(G)
    T = sipp_topology(O, p)
    for x in range(O.nobj):
        assert ses_quotient(O, T.min_sieve(x)).exact


def test_resolution_of_representable():
    O = orbit_category("S3")
    for x in range(O.nobj):
        res = resolve_by_representables(representable(O, x), 2)
        assert res.is_exact()
        assert len(res.stages[0].gens) == 1
        assert res.stages[0].kernel.is_zero()
        assert all(len(s.gens) == 0 for s in res.stages[1:])


def test_resolution_of_min_sieve_s3():
    O, T = s3_sipp()
    res = resolve_by_representables(z_linearize(O, T.min_sieve(O.nobj - 1)), 3)
    assert res.is_exact()
    c3 = [H.order for H in O.object_subgroup].index(3)
    assert res.stages[0].support == [c3]
    assert len(res.stages[0].gens) == 1
    p_objects = {x for x, H in enumerate(O.object_subgroup) if H.order in (1, 3)}
    assert all(set(s) <= p_objects for s in res.supports())


@pytest.mark.parametrize("G,p", [("A4", 2), ("D8", 2), ("S4", 3), ("Q8", 2)])
def test_resolution_support_on_p_subgroups(G, p):
    O = orbit_category(G)
    T = sipp_topology(O, p)
    res = resolve_by_representables(z_linearize(O, T.min_sieve(O.nobj - 1)), 2)
    assert res.is_exact()
    p_objects = {x for x, H in enumerate(O.object_subgroup) if _primes(H.order) <= {p}}
    assert all(set(s) <= p_objects for s in res.supports())


def _primes(n):
    out, d = set(), 2
    while n > 1:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    return out


def test_periodic_resolution_of_c2():
    C = one_object_group_category(group_from_spec("C2"))
    res = resolve_by_representables(z_constant(C), 4)
    assert res.is_exact()
    assert [len(s.gens) for s in res.stages] == [1] * 5


def test_resolution_rejects_torsion():
    C = one_object_group_category(group_from_spec("C2"))
    with pytest.raises(ValueError):
        resolve_by_representables(AbPresheaf.constant(C, [2]), 1)


def test_ext_of_representable():
    D = orbit_category("A4", 2, "p-nontrivial")
    M = coefficient_battery(Case("A4", 2, 7), D)[1][1]
    for x in range(D.nobj):
        ext = ext_over_category(representable(D, x), M, 2, use_skeleton=False)
        assert ext[0].invariants == M.values[x].invariants
        assert ext[1].is_trivial() and ext[2].is_trivial()


@pytest.mark.parametrize("q,want", [(3, [[2], [2]]), (4, [[3], []]), (5, [[4], [2]])])
def test_ext_min_sieve_units_s3(q, want):
    Gm, O = units_sheaf("S3", 3, q)
    ZS = z_linearize(O, sipp_topology(O, 3).min_sieve(O.nobj - 1))
    assert [g.invariants for g in ext_over_category(ZS, Gm, 1)] == want


def test_cech_units_s3():
    Gm, O = units_sheaf("S3", 3, 4)
    T = sipp_topology(O, 3)
    assert cech_cohomology(O.nobj - 1, Gm, T, 0).invariants == [3]
    Gm, O = units_sheaf("S3", 3, 3)
    assert cech_cohomology(O.nobj - 1, Gm, T, 1).invariants == [2]


def test_cech_minimal_topology():
    Gm, O = units_sheaf("A4", 2, 4)
    T = minimal_topology(O)
    for x in range(O.nobj):
        assert cech_cohomology(x, Gm, T, 0).invariants == Gm.values[x].invariants
        assert cech_cohomology(x, Gm, T, 1).is_trivial()


def _battery():
    out = []
    for case in (Case("S3", 3, 5), Case("A4", 2, 4), Case("D8", 2, 3), Case("S4", 3, 7)):
        for name, M in coefficient_battery(case):
            out.append(pytest.param(M, id=f"{case.label}/{name}"))
    return out


@pytest.mark.parametrize("M", _battery())
def test_ext_of_constant_is_category_cohomology(M):
    C = M.base
    ext, res = ext_groups(z_constant(C), M, 2)
    assert res.is_exact()
    assert [g.invariants for g in ext] == [category_cohomology(C, M, i).invariants for i in range(3)]


@pytest.mark.parametrize("M", _battery())
def test_ext_zero_is_nat(M):
    D = M.base
    O = orbit_category(D.group)
    R = right_kan(M, orbit_inclusion(D, O))
    T = sipp_topology(O, D.p)
    for x in range(O.nobj):
        S = T.min_sieve(x)
        assert ext_over_category(z_linearize(O, S), R, 0)[0].invariants == NatGroup(R, S).invariants


def test_skeleton_flag_agrees():
    Gm, O = units_sheaf("S3", 3, 5)
    ZS = z_linearize(O, sipp_topology(O, 3).min_sieve(O.nobj - 1))
    a = [g.invariants for g in ext_over_category(ZS, Gm, 2)]
    b = [g.invariants for g in ext_over_category(ZS, Gm, 2, use_skeleton=False)]
    assert a == b
