import pytest
from hypothesis import given, strategies as st

from orbitsite.errors import MalformedDescriptor, MalformedPermutation, NotASubgroupPair, OrderGuardExceeded
from orbitsite import guards
from orbitsite.groups import (
    all_subgroups,
    group_from_spec,
    is_p_group,
    normalizer,
    p_part_coprime_index,
    parse_cycles,
    perm_to_cycles,
    sylow_subgroup,
    sylow_subgroups,
)

from oracles import perm_closure_order, subgroups_bruteforce


def by_order(G):
    out = {}
    for H in G.subgroups:
        out[H.order] = out.get(H.order, 0) + 1
    return out


def test_catalog_orders():
    assert group_from_spec("symmetric 3").order == 6
    assert group_from_spec("cyclic 1").order == 1
    assert group_from_spec("quaternion 8").order == 8
    assert group_from_spec("klein four").order == 4
    assert group_from_spec("alternating 4").order == 12
    assert group_from_spec("cyclic 2 x cyclic 3").order == 6


def test_explicit_generators_dihedral():
    G = group_from_spec("gens[4]: (0 1 2 3), (0 2)")
    assert G.order == 8
    assert G.order == perm_closure_order(4, G.generators)
    assert group_from_spec("D8").order == 8


def test_identity_first_and_closed():
    G = group_from_spec("S4")
    assert G.elements[0] == tuple(range(4))
    for a in range(G.order):
        assert G.mul[a, G.inv[a]] == 0


def test_subgroup_counts():
    assert len(group_from_spec("S3").subgroups) == 6
    assert by_order(group_from_spec("S3")) == {1: 1, 2: 3, 3: 1, 6: 1}
    assert len(group_from_spec("C5").subgroups) == 2
    assert by_order(group_from_spec("A4")) == {1: 1, 2: 3, 3: 4, 4: 1, 12: 1}


@pytest.mark.parametrize("name", ["S3", "C4", "Q8", "D8", "A4", "S4", "C2 x C2 x C2"])
def test_subgroups_match_bruteforce(name):
    G = group_from_spec(name)
    mine = {frozenset(H.elements) for H in G.subgroups}
    assert mine == subgroups_bruteforce(G, 3)


def test_canonical_ids_sorted():
    G = group_from_spec("S4")
    subs = all_subgroups(G)
    assert [H.canonical_id for H in subs] == list(range(len(subs)))
    keys = [(H.order, H.elements) for H in subs]
    assert keys == sorted(keys)
    assert [H.members for H in all_subgroups(G)] == [H.members for H in subs]


def test_sylow_examples():
    S3 = group_from_spec("symmetric 3")
    P = sylow_subgroup(S3.whole, 3)
    assert P.order == 3
    assert sylow_subgroup(S3.whole, 5).order == 1
    S4 = group_from_spec("S4")
    P2 = sylow_subgroup(S4.whole, 2)
    d8s = [H for H in S4.subgroups if H.order == 8]
    assert len(d8s) == 3
    assert P2 == min(d8s, key=lambda H: H.canonical_id)
    assert len(sylow_subgroups(S4.whole, 3)) == 4


def test_normalizer_examples():
    G = group_from_spec("symmetric 3")
    C3 = [H for H in G.subgroups if H.order == 3][0]
    assert normalizer(C3) == G.whole
    assert normalizer(G.whole) == G.whole
    t = G.generated([(1, 0, 2)])
    assert normalizer(t) == t


def test_coprime_index_examples():
    G = group_from_spec("symmetric 3")
    C3 = [H for H in G.subgroups if H.order == 3][0]
    C2 = [H for H in G.subgroups if H.order == 2][0]
    assert p_part_coprime_index(G.whole, C3, 3)
    assert not p_part_coprime_index(G.whole, C2, 3)
    assert p_part_coprime_index(C3, C3, 3)
    with pytest.raises(NotASubgroupPair):
        p_part_coprime_index(C2, C3, 3)


def test_errors():
    with pytest.raises(MalformedPermutation):
        parse_cycles("(0 1 1)", 3)
    with pytest.raises(MalformedDescriptor):
        group_from_spec("banana 7")
    with guards.overrides(max_order=10):
        with pytest.raises(OrderGuardExceeded):
            group_from_spec("gens: (0 1 2 3 4), (0 1)")


def test_cycle_roundtrip():
    p = parse_cycles("(0 2 1)(3 4)", 5)
    assert parse_cycles(perm_to_cycles(p), 5) == p


@given(st.sampled_from(["S3", "C4", "Q8", "D8", "A4", "S4", "C6", "D12"]), st.sampled_from([2, 3, 5]))
def test_sylow_and_normalizer_invariants(name, p):
    G = group_from_spec(name)
    for H in G.subgroups:
        assert normalizer(H).order % H.order == 0
        P = sylow_subgroup(H, p)
        assert is_p_group(P, p) and P <= H
        assert (H.order // P.order) % p != 0
