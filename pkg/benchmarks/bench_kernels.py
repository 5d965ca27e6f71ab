"""Time each kernel under the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Numba kernels are compiled by one warm-up call before timing. Results of
the two backends are compared on every workload.
"""
import argparse
import timeit

import numpy as np

from covercraft import _kernels, using_backend
from covercraft.gf import all_vectors, field_make
from covercraft.graphs import flow_space, petersen
from covercraft.groups import FiniteAbelianGroup, parse_group


def gray_workload():
    g = FiniteAbelianGroup.elementary(3, 5)
    rng = np.random.default_rng(0)
    xs = rng.integers(0, g.order, size=18)
    plus = np.array([[g.add(u, int(x)) for u in range(g.order)] for x in xs])
    minus = np.array([[g.add(u, g.neg(int(x))) for u in range(g.order)] for x in xs])
    return "gray_parity  (18 vectors, GF(3)^5)", lambda: _kernels.gray_parity(plus, minus)


def uncovered_workload():
    f = field_make(5)
    vecs = all_vectors(5, 6)
    rng = np.random.default_rng(1)
    normals = rng.integers(0, 5, size=(12, 6))
    offsets = rng.integers(0, 5, size=12)
    return "uncovered_points (12 hyperplanes, GF(5)^6)", lambda: _kernels.uncovered_points(
        vecs, normals, offsets, f.add, f.mul)


def ajt_workload():
    f = field_make(7)
    # a matrix with no witness forces the full (q-1)^n scan
    m = np.zeros((6, 6), dtype=np.int64)
    m[0, 0] = 1
    return "ajt_search   (no witness, GF(7), n=6)", lambda: _kernels.ajt_search(m, f.add, f.mul, 7)


def flow_workload():
    grp = parse_group("C5")
    space = flow_space(petersen(), grp)
    return "flow_scan    (Petersen, C5, 5^6 flows)", lambda: _kernels.flow_scan(
        space.coef, grp.order, grp.add_table, grp.neg_table, 0, space.size)


def same(a, b):
    if a is None or b is None:
        return a is None and b is None
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'workload':48s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}  agree")
    for make in (gray_workload, uncovered_workload, ajt_workload, flow_workload):
        name, fn = make()
        times, results = {}, {}
        for name_b in ("numpy", "numba"):
            with using_backend(name_b):
                results[name_b] = fn()  # warm-up, compiles numba
                times[name_b] = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        agree = same(results["numpy"], results["numba"])
        print(f"{name:48s} {times['numpy']:10.2f} {times['numba']:10.2f} "
              f"{times['numpy'] / times['numba']:7.1f}x  {agree}")


if __name__ == "__main__":
    main()
