"""Timing and query-count benchmarks, emitted as JSON rows."""
from __future__ import annotations

import math
import time

import numpy as np

from . import _backend
from .graph import gen_erdos_renyi
from .order import compute_apx_dd, compute_dd
from .ugs import UgsSampler


def er_power(n, exponent=1.5, seed=0):
    """ER graph with about n^exponent edges."""
    p = min(1.0, n ** exponent / (n * (n - 1) / 2))
    return gen_erdos_renyi(n, p, seed)


def apx_dd_scaling(sizes=(500, 1000, 2000), k=3, beta=0.25, seed=0, exhaustive=True, h=None):
    rows = []
    for n in sizes:
        g = er_power(n, seed=seed)
        g.ledger.reset()
        t0 = time.perf_counter()
        o = compute_apx_dd(g, k, beta, seed, exhaustive=exhaustive, h=h)
        dt = time.perf_counter() - t0
        rows.append({"what": "apx-dd", "n": n, "m": g.m, "k": k, "beta": beta, "seed": seed,
                     "exhaustive": exhaustive, "h": o.params.samples(n), "seconds": dt,
                     **g.ledger.snapshot()})
    return rows


def loglog_exponent(rows, key="total"):
    x = np.log([r["n"] for r in rows])
    y = np.log([max(r[key], 1) for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def ugs_preprocessing(graph, k):
    graph.ledger.reset()
    t0 = time.perf_counter()
    o = compute_dd(graph, k)
    dt = time.perf_counter() - t0
    return {"what": "ugs-pre", "n": graph.n, "m": graph.m, "k": k, "seconds": dt, "Z": str(o.Z),
            **graph.ledger.snapshot()}


def backends(graph, k, samples=2000, seed=0):
    """Per-sample time of each available backend on the same seeded run."""
    rows, outs = [], {}
    order = compute_dd(graph, k)
    names = ["python"] + (["compiled"] if _backend.compiled is not None else [])
    for name in names:
        s = UgsSampler(graph, k, order, backend=name)
        t0 = time.perf_counter()
        out, st = s.sample(samples, seed=seed)
        dt = time.perf_counter() - t0
        outs[name] = out
        rows.append({"what": "backend", "backend": name, "n": graph.n, "m": graph.m, "k": k,
                     "samples": samples, "seconds": dt, "per_sample_us": 1e6 * dt / samples,
                     "mean_trials": st.mean_trials})
    if len(rows) == 2:
        rows.append({"what": "backend-compare", "speedup": rows[0]["seconds"] / rows[1]["seconds"],
                     "identical": bool(np.array_equal(outs["python"], outs["compiled"]))})
    return rows


def sampling(sampler, samples, seed=0):
    t0 = time.perf_counter()
    out, st = sampler.sample(samples, seed=seed)
    dt = time.perf_counter() - t0
    return {"what": "sample", "samples": samples, "seconds": dt,
            "per_sample_us": 1e6 * dt / max(samples, 1), "mean_trials": st.mean_trials,
            "seed": seed}


def fit_row(rows):
    return {"what": "fit", "exponent": loglog_exponent(rows),
            "last_total_over_m": rows[-1]["total"] / rows[-1]["m"] if rows else math.nan}
