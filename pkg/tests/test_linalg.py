import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbitsite.abelian import AbGroup, AbMap, CochainComplexZ, complex_cohomology, hom_ker_coker
from orbitsite.errors import IllDefinedMap
from orbitsite.linalg import (
    Lattice,
    NoSolution,
    QuotientModule,
    SparseMatrix,
    hermite_normal_form,
    invariant_factors_of_cokernel,
    kernel_basis,
    matmul,
    obj_matrix,
    smith_normal_form,
    snf_diagonal,
    solve_integer,
)
from orbitsite.verify import snf_random_suite

from oracles import det, rational_rank, snf_by_minors

mat = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def check_snf(A):
    U, D, V = smith_normal_form(A)
    assert (matmul(matmul(U, A), V) == D).all()
    assert abs(det(U.tolist())) == 1 and abs(det(V.tolist())) == 1
    return [int(D[i, i]) for i in range(min(D.shape))]


def test_snf_examples():
    assert check_snf([[2, 4], [6, 8]]) == [2, 4]
    assert check_snf(np.eye(3, dtype=np.int64).tolist()) == [1, 1, 1]
    assert check_snf([[0, 0], [0, 0]]) == [0, 0]


def test_snf_random_500():
    rng = random.Random(1234)
    for _ in range(500):
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        dens = rng.choice([0.3, 0.6, 1.0])
        A = [[rng.randint(-20, 20) if rng.random() < dens else 0 for _ in range(n)] for _ in range(m)]
        diag = check_snf(A)
        nz = [d for d in diag if d]
        assert all(d > 0 for d in nz)
        assert diag[: len(nz)] == nz
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
        assert len(nz) == rational_rank(A)


def test_snf_suite_helper():
    r = snf_random_suite(n_cases=500, seed=7)
    assert r["ok"] and r["cases"] == 500


@given(mat)
def test_snf_matches_minors_oracle(A):
    assert snf_diagonal(A) == snf_by_minors(A)


def test_snf_big_entries_exact():
    A = [[10**30 + 1, 2], [4, 10**30 + 3]]
    diag = check_snf(A)
    assert diag[0] * diag[1] == abs(det(A))


def test_solve_examples():
    assert solve_integer([[2]], [4]) == [2]
    ns = solve_integer([[2]], [3])
    assert isinstance(ns, NoSolution)
    assert solve_integer([[2, 3]], [1]) == [-1, 1]


@given(mat, st.data())
def test_solve_roundtrip(A, data):
    n = len(A[0])
    x0 = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    x = solve_integer(A, b)
    assert not isinstance(x, NoSolution)
    assert [sum(a * v for a, v in zip(row, x)) for row in A] == b


def test_no_solution_certificate():
    A, b = [[2, 4], [6, 8]], [1, 0]
    ns = solve_integer(A, b)
    assert isinstance(ns, NoSolution)
    rowA = [sum(ns.row[i] * A[i][j] for i in range(2)) for j in range(2)]
    rb = sum(r * v for r, v in zip(ns.row, b))
    if ns.modulus:
        assert all(v % ns.modulus == 0 for v in rowA) and rb % ns.modulus
    else:
        assert rowA == [0, 0] and rb != 0


@given(mat)
def test_kernel_and_hnf(A):
    K = kernel_basis(A)
    n = len(A[0])
    assert K.shape[0] == n
    assert K.shape[1] == n - rational_rank(A)
    if K.size:
        assert not np.any(matmul(A, K))
    H = hermite_normal_form(A)
    assert rational_rank(H.tolist()) == rational_rank(A) if H.size else rational_rank(A) == 0


def test_ker_coker_examples():
    Z4 = AbGroup.from_invariants([4])
    kc = hom_ker_coker(AbMap(Z4, Z4, obj_matrix([[2]])))
    assert kc.kernel.invariants == [2] and kc.cokernel.invariants == [2]
    Z2 = AbGroup.free(2)
    kc = hom_ker_coker(AbMap(Z2, Z2, obj_matrix([[1, 0], [0, 1]])))
    assert kc.kernel.is_trivial() and kc.cokernel.is_trivial()
    kc = hom_ker_coker(AbMap(AbGroup.free(1), AbGroup.from_invariants([3]), obj_matrix([[0]])))
    assert kc.kernel.invariants == [0] and kc.cokernel.invariants == [3]
    with pytest.raises(IllDefinedMap):
        hom_ker_coker(AbMap(AbGroup.from_invariants([2]), AbGroup.from_invariants([3]), obj_matrix([[1]])))


def test_ker_coker_inclusion_is_zero_after_f():
    A = AbGroup.from_invariants([2, 4, 0])
    B = AbGroup.from_invariants([4, 0])
    f = AbMap(A, B, obj_matrix([[2, 1, 0], [0, 0, 3]]))
    kc = hom_ker_coker(f)
    assert f.compose(kc.inclusion).is_zero()
    assert kc.projection.compose(f).is_zero()


def test_complex_examples():
    X = CochainComplexZ([AbGroup.zero(), AbGroup.zero()], [obj_matrix([], 0, 0)])
    assert complex_cohomology(X, 0).is_trivial() and complex_cohomology(X, 1).is_trivial()
    Z = AbGroup.free(1)
    X = CochainComplexZ([Z, Z], [obj_matrix([[2]])])
    assert complex_cohomology(X, 0).is_trivial()
    assert complex_cohomology(X, 1).invariants == [2]
    Z2 = AbGroup.from_invariants([2])
    X = CochainComplexZ([Z2, Z2, Z2], [obj_matrix([[0]]), obj_matrix([[0]])])
    assert [complex_cohomology(X, i).invariants for i in range(3)] == [[2], [2], [2]]
    assert X.check_d_squared()


@given(st.lists(st.integers(0, 12), max_size=5), st.randoms(use_true_random=False))
def test_presentation_independence(invs, rnd):
    """A unimodular change of generators does not change the invariants."""
    n = len(invs)
    if n == 0:
        return
    R = np.diag(np.array(invs, dtype=object))
    P = np.eye(n, dtype=object)
    for _ in range(4):
        i, j = rnd.randrange(n), rnd.randrange(n)
        if i != j:
            P[i] = P[i] + rnd.randint(-3, 3) * P[j]
    G1 = AbGroup(n, obj_matrix(R.tolist(), n, n))
    G2 = AbGroup(n, obj_matrix(matmul(P, R).tolist(), n, n))
    diag = snf_by_minors(R.tolist())
    expect = [d for d in diag if d > 1] + [0] * diag.count(0)
    assert G1.invariants == G2.invariants == expect


@given(st.lists(st.integers(1, 6), min_size=1, max_size=4))
def test_euler_additivity(ms):
    """0 -> A -> A+B -> B -> 0 of two-term complexes Z/m --0--> Z/m: orders multiply."""
    A = [AbGroup.from_invariants([m]) for m in ms]
    X = CochainComplexZ(A, [obj_matrix([[0]]) for _ in range(len(A) - 1)])
    total = 1
    for i in range(len(A)):
        total *= complex_cohomology(X, i).order()
    expect = 1
    for m in ms:
        expect *= m
    assert total == expect


def test_quotient_module_coords():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 8)
        rels = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(rng.randint(0, 8))]
        Q = QuotientModule(n, rels)
        assert Q.invariants == invariant_factors_of_cokernel(np.array(rels, dtype=object).T.tolist() if rels else [[0] * 0 for _ in range(n)], n) or not rels
        for r in rels:
            assert Q.is_zero(r)
        for k, lift in enumerate(Q.lifts()):
            e = [0] * Q.rank
            e[k] = 1
            c = Q.coords(lift)
            assert [x % d if d else x for x, d in zip(c, Q.invariants)] == e


def test_lattice_membership():
    L = Lattice(3, [[2, 0, 0], [0, 3, 0], [1, 1, 1]])
    assert L.rank == 3
    assert L.contains([3, 4, 1])
    assert not L.contains([1, 0, 0])


def test_sparse_matrix():
    S = SparseMatrix(3, 2)
    S.add(0, 0, 2)
    S.add(2, 1, -1)
    S.add(0, 0, -2)
    assert S.nnz() == 1
    assert S.apply([1, 5]) == [0, 0, -5]
    assert S.dense().tolist() == [[0, 0], [0, 0], [0, -1]]
