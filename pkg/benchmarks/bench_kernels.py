"""Time the compiled kernel core against the NumPy reference backend.

Runs identical leapfrog trajectories through every backend importable in this
environment, reports steps/s, and cross-checks that the final fields agree
bit for bit.  Usage:

    python3 benchmarks/bench_kernels.py --group SU2 --extent 16 --steps 500
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gaugelab import LatticeGeometry, gauge_group, structure_constants
from gaugelab.kernels import available_backends
from gaugelab.lattice import kernel_tables


def run(args) -> int:
    group = gauge_group(args.group)
    sc = structure_constants(group)
    geometry = LatticeGeometry((args.extent,) * args.dims)
    tables = kernel_tables(geometry, sc)

    rng = np.random.Generator(np.random.Philox(args.seed))
    shape = (geometry.n_sites, geometry.spatial_dim, group.dim)
    A0 = np.ascontiguousarray(rng.normal(0.0, 0.25, size=shape))
    E0 = np.ascontiguousarray(rng.normal(0.0, 0.25, size=shape))

    backends = available_backends()
    print(
        f"group={group.kind.value} lattice={'x'.join(map(str, geometry.extent))} "
        f"steps={args.steps} dt={args.dt} g={args.g}"
    )

    finals = {}
    rates = {}
    for name in sorted(backends):
        mod = backends[name]
        A, E = A0.copy(), E0.copy()
        mod.leapfrog_steps(A, E, args.warmup, args.dt, args.g, tables)
        A, E = A0.copy(), E0.copy()
        t0 = time.perf_counter()
        rc = mod.leapfrog_steps(A, E, args.steps, args.dt, args.g, tables)
        elapsed = time.perf_counter() - t0
        if rc != -1:
            print(f"{name:>9}: blew up at step {rc}; lower --dt or --g")
            return 1
        rates[name] = args.steps / elapsed
        finals[name] = (A, E)
        print(f"{name:>9}: {elapsed:8.3f} s  {rates[name]:10.0f} steps/s")

    if len(finals) == 2:
        (A1, E1), (A2, E2) = finals["compiled"], finals["numpy"]
        agree = np.array_equal(A1, A2) and np.array_equal(E1, E2)
        print(f"bit-identical final state: {agree}")
        print(f"speedup compiled/numpy: {rates['compiled'] / rates['numpy']:.1f}x")
        if not agree:
            return 1
    else:
        print("single backend available; no cross-check")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--group", default="SU2", choices=("U1", "SU2", "SU3"))
    ap.add_argument("--extent", type=int, default=16)
    ap.add_argument("--dims", type=int, default=2, choices=(1, 2, 3))
    ap.add_argument("--steps", type=int, default=500)
    ap.add_argument("--warmup", type=int, default=50)
    ap.add_argument("--dt", type=float, default=0.02)
    ap.add_argument("--g", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    return run(ap.parse_args(argv))


if __name__ == "__main__":
    raise SystemExit(main())
