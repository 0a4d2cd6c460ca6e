"""Compare the numba kernels with their pure-numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run on inputs taken from real orbit categories; outputs of
the two paths are asserted equal before timing.  The first numba call
(compilation, or a cache load) is excluded.
"""

import argparse
import time

import numpy as np

from orbitsite import kernels
from orbitsite.fincat import _out_csr, nerve_chains, skeleton
from orbitsite.orbit import orbit_category
from orbitsite.picard import composition_constraints


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def chain_inputs(group, p, n):
    C = skeleton(orbit_category(group, p, "p-subgroups")).cat
    chains = nerve_chains(C, n, normalized=False)
    ptr, idx = _out_csr(C, False)
    last = np.ascontiguousarray(C.cod[chains[:, -1]])
    return C, np.ascontiguousarray(chains), last, ptr, idx


def cases():
    C, chains, last, ptr, idx = chain_inputs("S4", 2, 3)
    yield (
        "extend_chains S4/p=2 deg3->4",
        lambda: kernels.extend_chains_nb(chains, last, ptr, idx),
        lambda: kernels.extend_chains_np(chains, last, ptr, idx),
    )
    big = nerve_chains(C, 4)
    table, ident = C.table, np.asarray(C.is_identity, dtype=np.bool_)
    yield (
        "face_codes S4/p=2 deg4 inner face",
        lambda: kernels._face_codes_nb(big, table, ident, C.nmor, 2, True),
        lambda: kernels.face_codes_np(big, table, ident, C.nmor, 2, True),
    )
    for group, p, m in (("A4", 2, 3), ("S3", 3, 12), ("D8", 2, 2)):
        B = skeleton(orbit_category(group, p, "p-nontrivial")).cat
        var = [f for f in range(B.nmor) if not B.is_identity[f]]
        packed = kernels.pack_constraints(len(var), composition_constraints(B, var))
        args = (len(var), m, *packed, 10**6)
        yield (
            f"enumerate_cocycles {group}/p={p} m={m} ({len(var)} vars)",
            lambda args=args: kernels._cocycles_nb(*args),
            lambda args=args: kernels._cocycles_np(*args),
        )
        sols, _ = kernels._cocycles_nb(*args)
        full = np.zeros((sols.shape[0], B.nmor), dtype=np.int64)
        full[:, var] = sols
        dom, cod = np.asarray(B.dom), np.asarray(B.cod)
        yield (
            f"canonical_forms {group}/p={p} m={m} ({full.shape[0]} rows)",
            lambda full=full, dom=dom, cod=cod, m=m, n=B.nobj: kernels._canon_nb(full, dom, cod, m, n),
            lambda full=full, dom=dom, cod=cod, m=m, n=B.nobj: kernels._canon_np(full, dom, cod, m, n),
        )


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':48s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, nb, npy in cases():
        assert same(nb(), npy()), name  # also warms up numba
        t_nb = best_of(nb, args.repeat)
        t_np = best_of(npy, args.repeat)
        print(f"{name:48s} {t_nb * 1e3:10.3f} {t_np * 1e3:10.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
