"""Comparison checks between the cohomology engines on orbit categories."""

from __future__ import annotations

import numpy as np

from .abelian import AbGroup, AbMap, hom_ker_coker
from .cohomology import BarComplex, category_cohomology, cochain_map, induced_map
from .errors import NotASheaf
from .fincat import FinFunctor, full_subcategory, identity_functor, skeleton
from .kan import RightKan, derived_right_kan, right_kan, right_kan_counit
from .orbit import OrbitCategory, orbit_category, orbit_inclusion
from .presheaves import AbPresheaf, restrict
from .resolution import ext_over_category, ses_quotient, z_constant, z_linearize
from .sites import NatGroup, is_sheaf, sipp_topology


def _p_nontrivial(G, p):
    return orbit_category(G, p, "p-nontrivial")


def topos_cohomology_sipp(F: AbPresheaf, p: int, i: int, check: bool = True) -> AbGroup:
    """H^i of the sipp site with coefficients in a sheaf F on O(G), via O_p(G)."""
    O = F.base
    if check:
        rep = is_sheaf(F, sipp_topology(O, p))
        if not rep.ok:
            raise NotASheaf(f"coefficients are not a sipp sheaf: {rep.witness}")
    Op = orbit_category(O.group, p, "p-subgroups")
    return category_cohomology(Op, restrict(F, orbit_inclusion(Op, O)), i)


def _factor_through(F: FinFunctor, sub: OrbitCategory) -> FinFunctor:
    """Corestrict a functor into an orbit category onto the full orbit subcategory ``sub``."""
    C = F.target
    obj = np.array([sub.object_of[C.object_subgroup[int(x)].members] for x in F.obj_map], dtype=np.int64)
    mor = np.array(
        [sub.morphism(int(obj[F.source.dom[f]]), int(obj[F.source.cod[f]]), int(C.morphism_coset[int(F.mor_map[f])]))
         for f in range(F.source.nmor)],
        dtype=np.int64,
    )
    return FinFunctor(F.source, sub, obj, mor)


def edge_map_check(G, p: int, M: AbPresheaf, i: int, use_skeleton: bool = True) -> dict:
    """Is H^i(O_p(G), RK M) -> H^i(O_p°(G), M), induced by restriction and the counit, bijective?"""
    D = M.base
    Op = orbit_category(D.group, p, "p-subgroups")
    iota = orbit_inclusion(D, Op)
    rk = RightKan(M, iota)
    eps = right_kan_counit(M, iota, rk)
    if use_skeleton:
        sk = skeleton(Op)
        S = sk.cat
        keep = [s for s, x in enumerate(sk.representatives) if Op.object_subgroup[x].order > 1]
        Dsk, incD = full_subcategory(S, keep)
        to_D = _factor_through(sk.inclusion.compose(incD), D)
        N = restrict(rk.presheaf, sk.inclusion)
    else:
        S, Dsk, incD = Op, D, iota
        to_D = identity_functor(D)
        N = rk.presheaf
    MD = restrict(M, to_D)
    src = BarComplex(S, N, i + 1)
    tgt = BarComplex(Dsk, MD, i + 1)
    Hs, Ht = src.cohomology(i), tgt.cohomology(i)
    cm = cochain_map(src, tgt, i, incD, lambda x: eps.components[int(to_D.obj_map[x])])
    mat = induced_map(Hs, Ht, cm)
    f = AbMap(AbGroup.from_invariants(Hs.invariants), AbGroup.from_invariants(Ht.invariants), mat)
    kc = hom_ker_coker(f)
    iso = kc.kernel.is_trivial() and kc.cokernel.is_trivial()
    return {
        "ok": bool(iso),
        "degree": i,
        "source": Hs.invariants,
        "target": Ht.invariants,
        "kernel": kc.kernel.invariants,
        "cokernel": kc.cokernel.invariants,
    }


def leray_vanishing_check(G, p: int, M: AbPresheaf, i: int = 1, j: int = 1) -> dict:
    """H^i(O_p(G), restrict(R^j I_* M)) for I: O_p°(G) -> O(G); expected zero.

    R^j I_* M is only evaluated on the p-subgroup objects, which is all the
    restriction needs.
    """
    D = M.base
    O = orbit_category(D.group)
    Op = orbit_category(D.group, p, "p-subgroups")
    objs = orbit_inclusion(Op, O).obj_map
    N = derived_right_kan(M, orbit_inclusion(D, O), j, objects=objs)
    H = category_cohomology(N.base, N, i)
    return {"ok": H.is_trivial(), "degree": i, "derived_degree": j, "invariants": H.invariants, "values": N.invariants()}


def ext_comparison_check(G, p: int, M: AbPresheaf, degrees=(0, 1, 2)) -> dict:
    """Ext^i(Z S^min_{G/G}, RK M) against H^i(O_p°(G), M), degreewise."""
    D = M.base
    O = orbit_category(D.group)
    R = right_kan(M, orbit_inclusion(D, O))
    T = sipp_topology(O, p)
    top = O.nobj - 1
    S = T.min_sieve(top)
    ZS = z_linearize(O, S)
    imax = max(degrees)
    ext = [g.invariants for g in ext_over_category(ZS, R, imax)]
    bar = [category_cohomology(D, M, k).invariants for k in range(imax + 1)]
    nat = NatGroup(R, S).invariants
    rows = [{"degree": k, "ext": ext[k], "bar": bar[k], "ok": ext[k] == bar[k]} for k in degrees]
    return {"ok": all(r["ok"] for r in rows) and nat == ext[0], "rows": rows, "nat": nat}


def ext_quotient_check(O: OrbitCategory, p: int, Mhat: AbPresheaf, degree: int = 1) -> dict:
    """Ext(Q, Mhat) over O(G) against Ext(Z, Mhat|) over the p-coprime-index category.

    Q is the cokernel of Z S^min_{G/G} -> Z-bar for the sipp topology.
    """
    T = sipp_topology(O, p)
    top = O.nobj - 1
    ses = ses_quotient(O, T.min_sieve(top))
    lhs = ext_over_category(ses.quotient, Mhat, degree)[degree].invariants
    C = orbit_category(O.group, p, "p-coprime-index")
    rhs = ext_over_category(z_constant(C), restrict(Mhat, orbit_inclusion(C, O)), degree)[degree].invariants
    return {"ok": lhs == rhs and ses.exact, "degree": degree, "lhs": lhs, "rhs": rhs, "exact": ses.exact}
