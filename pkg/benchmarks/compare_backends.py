"""Compiled core vs pure-Python kernels on the same seeded workloads.

    python benchmarks/compare_backends.py [--samples N] [--gen SPEC] [--k K]

Prints one JSON row per backend and workload and a speedup row; exits 1 if
the two backends ever disagree on output.
"""
import argparse
import json
import sys
import time

import numpy as np

from graphlets import _backend
from graphlets.apx import ApxUgsSampler
from graphlets.graph import from_spec
from graphlets.order import compute_apx_dd, compute_dd
from graphlets.ugs import UgsSampler
from graphlets.walk import RandomWalkSampler, WalkConfig


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gen", default="er:200,0.05,1")
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _backend.compiled is None:
        print("compiled core not built; nothing to compare", file=sys.stderr)
        return 2
    g = from_spec(args.gen)
    exact = compute_dd(g, args.k)
    apx = compute_apx_dd(g, args.k, 0.1, seed=args.seed)
    workloads = {
        "ugs": lambda b: UgsSampler(g, args.k, exact, backend=b).sample(args.samples, seed=args.seed)[0],
        "apx-ugs": lambda b: ApxUgsSampler(g, args.k, 0.2, order=apx, backend=b)
        .sample(max(1, args.samples // 10), seed=args.seed)[0],
        "rw": lambda b: RandomWalkSampler(g, WalkConfig(args.k, 20), backend=b)
        .sample(args.samples, seed=args.seed),
    }
    status = 0
    for name, fn in workloads.items():
        outs, secs = {}, {}
        for b in ("python", "compiled"):
            outs[b], secs[b] = timed(lambda: fn(b))
            print(json.dumps({"what": "backend", "workload": name, "backend": b, "seconds": secs[b],
                              "samples": len(outs[b]), "per_sample_us": 1e6 * secs[b] / max(len(outs[b]), 1)}))
        same = bool(np.array_equal(outs["python"], outs["compiled"]))
        status |= not same
        print(json.dumps({"what": "backend-compare", "workload": name,
                          "speedup": secs["python"] / secs["compiled"], "identical": same}))
    return int(status)


if __name__ == "__main__":
    sys.exit(main())
