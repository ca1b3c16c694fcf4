"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one row per kernel: best-of-N wall time for each backend and the speedup.
"""
import argparse
import timeit

import numpy as np

from hompath import _pykernels, scenes
from hompath.coord import enumerate_relations
from hompath.knot import build_surfaces

try:
    from hompath import _kernels
except ImportError:
    _kernels = None


def workloads(rng):
    p = enumerate_relations(4)
    n = len(p.alphabet)
    words = [list(rng.integers(1, n + 1, size=40) * rng.choice((-1, 1), size=40)) for _ in range(200)]
    rels = sorted(set(p.encode(r) for r in p.symmetricized))

    ss = build_surfaces(scenes.trefoil())
    A = rng.uniform(-3, 3, size=(5000, 3))
    B = A + rng.normal(scale=0.3, size=(5000, 3))

    origins = rng.uniform(0, 10, size=(30, 2))
    P = rng.uniform(0, 10, size=(20000, 2))
    Q = P + rng.normal(scale=0.5, size=(20000, 2))

    def make(k):
        relset = k.RelationSet(rels)
        return {
            "free_reduce": lambda: [k.free_reduce(w) for w in words],
            "dehn_linear": lambda: [k.dehn_linear(w, relset) for w in words],
            "dehn_cyclic": lambda: [k.dehn_cyclic(w, relset) for w in words],
            "segment_triangle_hits": lambda: k.segment_triangle_hits(A, B, ss.tris),
            "segment_ray_hits": lambda: k.segment_ray_hits(P, Q, origins),
        }

    return make


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    make = workloads(np.random.default_rng(0))
    py = make(_pykernels)
    cy = make(_kernels) if _kernels is not None else {}
    print(f"{'kernel':24s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in py.items():
        tp = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        if name in cy:
            tc = min(timeit.repeat(cy[name], number=1, repeat=args.repeat)) * 1e3
            print(f"{name:24s} {tp:10.2f} {tc:10.2f} {tp / tc:7.1f}x")
        else:
            print(f"{name:24s} {tp:10.2f} {'n/a':>10s} {'':>8s}")


if __name__ == "__main__":
    main()
