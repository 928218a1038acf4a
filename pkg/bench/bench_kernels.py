"""Compare the compiled and numpy kernels on the two enumeration workloads.

    python3 bench/bench_kernels.py [--repeat 3]

Prints one row per (workload, backend) with the best wall time and the
speedup of the compiled backend; values are also cross-checked.
"""
import argparse
import time

import numpy as np

from uncpoly import kernels

WORKLOADS = [
    ("vertices N=16 l2 real", lambda r: r.standard_normal((16, 8)), "vertex", (0, 2.0)),
    ("vertices N=18 sup complex", lambda r: r.standard_normal((18, 6)) + 1j * r.standard_normal((18, 6)),
     "vertex", (1, 0.0)),
    ("vertices N=14 l3 real", lambda r: r.standard_normal((14, 10)), "vertex", (0, 3.0)),
    ("torus N=4 m=24 l2", lambda r: r.standard_normal((4, 8)) + 1j * r.standard_normal((4, 8)), "torus", (0, 2.0)),
    ("torus N=5 m=16 l1", lambda r: r.standard_normal((5, 6)) + 1j * r.standard_normal((5, 6)), "torus", (0, 1.0)),
]


def run(kind, v, norm):
    if kind == "vertex":
        return kernels.vertex_norms(v, *norm)
    m = 24 if v.shape[0] == 4 else 16
    return kernels.torus_norms(v, *norm, m)


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    prev = kernels.backend_name()
    rng = np.random.default_rng(0)
    print(f"{'workload':28s} {'backend':8s} {'seconds':>9s} {'speedup':>8s}")
    try:
        for name, make, kind, norm in WORKLOADS:
            v = make(rng)
            res = {}
            for b in backends:
                kernels.use_backend(b)
                res[b] = best_time(lambda: run(kind, v, norm), args.repeat)
            base = res["python"][0]
            for b in backends:
                print(f"{name:28s} {b:8s} {res[b][0]:9.4f} {base / res[b][0]:7.1f}x")
            if len(backends) > 1:
                assert np.allclose(res["python"][1], res["cython"][1], rtol=1e-10, atol=1e-10)
    finally:
        kernels.use_backend(prev)


if __name__ == "__main__":
    main()
