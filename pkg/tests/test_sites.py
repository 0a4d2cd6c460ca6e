import itertools

import pytest
from hypothesis import given, strategies as st

from orbitsite.errors import ApexMismatch, MixedCodomain
from orbitsite.fincat import full_subcategory, identity_functor
from orbitsite.groups import is_p_group, sylow_subgroups
from orbitsite.orbit import orbit_category, orbit_inclusion
from orbitsite.presheaves import AbPresheaf, SetPresheaf
from orbitsite.sites import (
    FiniteTopology,
    Sieve,
    all_sieves,
    dense_subsite_check,
    generate_sieve,
    half_sheafify,
    is_cocontinuous,
    is_continuous,
    is_sheaf,
    matching_families,
    maximal_sieve,
    maximal_topology,
    minimal_topology,
    pullback_sieve,
    sheafify,
    sipp_topology,
    subcategory_covers_literal,
    subcategory_topology,
    topology_axioms_check,
)


def s3():
    O = orbit_category("S3")
    idx = {H.order: x for x, H in enumerate(O.object_subgroup)}  # one C2 stands in for all three
    return O, idx


def two_point_presheaf(O):
    """Two elements at G/1, a point elsewhere, identity/constant structure maps."""
    sizes = [2 if H.order == 1 else 1 for H in O.object_subgroup]
    maps = []
    for f in range(O.nmor):
        x, y = int(O.dom[f]), int(O.cod[f])
        maps.append(list(range(sizes[y])) if sizes[x] == sizes[y] else [0] * sizes[y])
    return SetPresheaf(O, sizes, maps)


def test_generate_examples():
    O, idx = s3()
    top = O.nobj - 1
    assert generate_sieve(O, [int(O.identities[top])]).members == maximal_sieve(O, top).members
    assert generate_sieve(O, [], apex=top).members == frozenset()
    u = O.hom(idx[3], top)[0]
    S = generate_sieve(O, [u])
    assert {int(O.dom[f]) for f in S.members} == {idx[1], idx[3]}
    with pytest.raises(MixedCodomain):
        generate_sieve(O, [u, int(O.identities[0])])


def test_pullback_examples():
    O, idx = s3()
    top = O.nobj - 1
    T = sipp_topology(O, 3)
    S = T.min_sieve(top)
    assert pullback_sieve(O, int(O.identities[top]), S) == S
    u = O.hom(idx[2], top)[0]
    assert pullback_sieve(O, u, maximal_sieve(O, top)).members == maximal_sieve(O, idx[2]).members
    P = pullback_sieve(O, u, S)
    assert {int(O.dom[f]) for f in P.members} == {idx[1]}
    assert P.members == frozenset(O.hom(idx[1], idx[2]))
    with pytest.raises(ApexMismatch):
        pullback_sieve(O, u, T.min_sieve(idx[3]))


def test_subcategory_topology_examples():
    O, idx = s3()
    T = subcategory_topology(O, range(O.nobj))
    assert all(T.min_sieve(x).is_maximal(O) for x in range(O.nobj))
    T3 = subcategory_topology(O, [idx[1], idx[3]])
    top = O.nobj - 1
    comps = {y: len(T3.min_sieve(top).component(O, y)) for y in range(O.nobj)}
    assert comps[idx[1]] == 1 and comps[idx[3]] == 1
    assert sum(comps.values()) == 2
    atomic = subcategory_topology(O, [idx[1]])
    for x in range(O.nobj):
        for S in all_sieves(O, x):
            assert atomic.is_covering(S) == bool(S.members)
    E = subcategory_topology(O, [])
    assert all(not E.min_sieve(x).members for x in range(O.nobj))


@pytest.mark.parametrize("name,p", [("S3", 3), ("S3", 2), ("C4", 2), ("A4", 2)])
def test_subcategory_closed_form_vs_literal(name, p):
    O = orbit_category(name)
    D = [x for x, H in enumerate(O.object_subgroup) if is_p_group(H, p)]
    T = subcategory_topology(O, D)
    for x in range(O.nobj):
        covering = [S for S in all_sieves(O, x) if subcategory_covers_literal(O, D, S)]
        assert min(covering, key=len).members == T.min_sieve(x).members
        assert all(T.min_sieve(x) <= S for S in covering)


def test_axioms_examples():
    O, _ = s3()
    assert topology_axioms_check(minimal_topology(O)) == {"ok": True, "status": "full"}
    assert topology_axioms_check(sipp_topology(O, 3))["ok"]
    assert topology_axioms_check(maximal_topology(O))["ok"]
    T = sipp_topology(O, 3)
    bad = list(T.min_sieves)
    bad[0] = Sieve(0, frozenset())  # G/1 must stay maximal under pullback
    rep = topology_axioms_check(FiniteTopology(O, bad))
    assert not rep["ok"] and rep["axiom"] in (2, 3)


def test_sheaf_examples():
    O, idx = s3()
    for p in (2, 3):
        T = sipp_topology(O, p)
        assert is_sheaf(AbPresheaf.constant(O, [p]), T).ok
        assert is_sheaf(SetPresheaf.constant(O, 3), T).ok
    F = two_point_presheaf(O)
    assert F.validate()["ok"]
    rep = is_sheaf(F, sipp_topology(O, 3))
    assert not rep.ok
    # the failure sits at G/C2: three maps from G/1 give two families for one section
    assert O.object_subgroup[rep.witness["object"]].order == 2
    # G/G itself sees one family under sipp (everything factors through the point at G/C3) ...
    top = O.nobj - 1
    assert len(matching_families(F, sipp_topology(O, 3).min_sieve(top))) == 1
    # ... and two under the atomic topology
    atomic = subcategory_topology(O, [idx[1]])
    assert len(matching_families(F, atomic.min_sieve(top))) == 2
    assert is_sheaf(F, minimal_topology(O)).ok


def test_half_sheafify_examples():
    O, idx = s3()
    T = sipp_topology(O, 3)
    K = AbPresheaf.constant(O, [2])
    assert half_sheafify(K, T).invariants() == K.invariants()
    F = two_point_presheaf(O)
    Fp = half_sheafify(F, T)
    assert Fp.sizes[O.nobj - 1] == 1
    assert half_sheafify(F, subcategory_topology(O, [idx[1]])).sizes[O.nobj - 1] == 2
    assert half_sheafify(F, minimal_topology(O)).sizes == F.sizes
    Fs, unit = sheafify(F, T)
    assert is_sheaf(Fs, T).ok and Fs.validate()["ok"]
    assert len(unit) == O.nobj


def test_dense_examples():
    O, idx = s3()
    T = sipp_topology(O, 3)
    assert dense_subsite_check(T, [idx[1], idx[3]])
    assert not dense_subsite_check(T, [idx[3]])
    assert dense_subsite_check(T, range(O.nobj))


def test_continuity_examples():
    O, idx = s3()
    D = orbit_category("S3", 3, "p-nontrivial")
    iota = orbit_inclusion(D, O)
    T_D, T_C = minimal_topology(D), sipp_topology(O, 3)
    assert is_continuous(iota, T_D, T_C)
    assert is_cocontinuous(iota, T_D, T_C)
    for T in (T_C, minimal_topology(O)):
        assert is_continuous(identity_functor(O), T, T, require_filtered=True)
        assert is_cocontinuous(identity_functor(O), T, T)
    # {G/C2} alone: the sipp minimal sieve on G/C2 has no member from G/C2 itself
    Dc2, inc = full_subcategory(O, [idx[2]])
    assert not is_cocontinuous(inc, minimal_topology(Dc2), T_C)
    assert is_cocontinuous(inc, minimal_topology(Dc2), minimal_topology(O))


def test_continuity_filtered_clause_is_literal():
    # the literal cofilteredness test fails for this inclusion: nothing maps out of G/G into G/C3
    O = orbit_category("S3")
    D = orbit_category("S3", 3, "p-nontrivial")
    assert not is_continuous(orbit_inclusion(D, O), minimal_topology(D), sipp_topology(O, 3), require_filtered=True)


@pytest.mark.parametrize("name,p", [("S3", 3), ("S3", 2), ("C4", 2), ("D8", 2), ("A4", 2), ("A4", 3), ("Q8", 2), ("S4", 2), ("S4", 3)])
def test_sipp_is_sylow_generated(name, p):
    O = orbit_category(name)
    T = sipp_topology(O, p)
    for x, H in enumerate(O.object_subgroup):
        gens = [O.morphism(O.object_by_subgroup(P), x, 0) for P in sylow_subgroups(H, p)]
        assert generate_sieve(O, gens, apex=x).members == T.min_sieve(x).members


@pytest.mark.parametrize("name", ["S3", "C4", "A4"])
def test_pullback_compatibility(name):
    O = orbit_category(name)
    T = sipp_topology(O, 2 if name != "S3" else 3)
    for x in range(O.nobj):
        S = T.min_sieve(x)
        for v in O.into(x):
            for u in O.into(int(O.dom[v])):
                lhs = pullback_sieve(O, u, pullback_sieve(O, v, S))
                assert lhs == pullback_sieve(O, int(O.table[v, u]), S)


@given(st.sampled_from(["S3", "C4", "A4"]), st.data())
def test_generate_idempotent(name, data):
    O = orbit_category(name)
    x = data.draw(st.integers(0, O.nobj - 1))
    gens = data.draw(st.lists(st.sampled_from(O.into(x)), max_size=3))
    S = generate_sieve(O, gens, apex=x)
    assert generate_sieve(O, S.members, apex=x) == S
    for f in S.members:
        for v in O.into(int(O.dom[f])):
            assert int(O.table[f, v]) in S.members


@pytest.mark.parametrize("name,p", [("S3", 3), ("C4", 2), ("S3", 2)])
def test_basis_vs_exhaustive(name, p):
    O = orbit_category(name)
    T = sipp_topology(O, p)
    cands = [AbPresheaf.constant(O, [n]) for n in (1, 2, 6)] + [two_point_presheaf(O) if name == "S3" else SetPresheaf.constant(O, 2)]
    for F in cands:
        assert is_sheaf(F, T).ok == is_sheaf(F, T, exhaustive=True).ok


def test_sieve_codec():
    O = orbit_category("A4")
    T = sipp_topology(O, 2)
    back = FiniteTopology.from_dict(O, T.to_dict())
    assert [S.members for S in back.min_sieves] == [S.members for S in T.min_sieves]
