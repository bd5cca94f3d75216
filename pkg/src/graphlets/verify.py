"""Invariant suites over one graph; each returns a JSON-ready report."""
from __future__ import annotations

import math

import numpy as np

from . import oracle
from .graph import Graph
from .order import compute_dd
from .ugs import UgsSampler
from .walk import RandomWalkSampler, WalkConfig

EPS_GRID = (0.25, 0.1, 0.01)


def sandwich(chain, eps) -> dict:
    """(tau - 1) ln(1/2eps) <= t_eps <= tau ln(1/(eps pi_min))."""
    tau = oracle.relaxation_time(chain)
    t = oracle.eps_mixing_time(chain, eps)
    lo = (tau - 1) * math.log(1 / (2 * eps))
    hi = tau * math.log(1 / (eps * chain.pi_min))
    return {"eps": eps, "tau": tau, "t_eps": t, "lower": lo, "upper": hi,
            "ok": bool(lo <= t + 1e-9 and t <= hi + 1e-9)}


def line_graph_relaxation(graph: Graph) -> dict:
    """tau(L(G)) <= 20 rho(G) tau(G) on a connected graph with at least one edge."""
    tG = oracle.relaxation_time(oracle.graph_chain(graph))
    tL = oracle.relaxation_time(oracle.graph_chain(oracle.line_graph(graph)))
    rho = oracle.rho(graph)
    return {"tau_G": tG, "tau_LG": tL, "rho": rho, "bound": 20 * rho * tG,
            "ok": bool(tL <= 20 * rho * tG * (1 + 1e-8))}


def spectral(graph: Graph) -> dict:
    report = {"suite": "spectral", "n": graph.n, "m": graph.m, "violations": []}
    if graph.m == 0 or not graph.is_connected():
        report["skipped"] = "needs a connected graph with an edge"
        return report
    l1 = line_graph_relaxation(graph)
    report.update({k: l1[k] for k in ("tau_G", "tau_LG", "rho")})
    report["line_graph_relaxation"] = l1
    if not l1["ok"]:
        report["violations"].append({"check": "line_graph_relaxation", **l1})
    sw = []
    for name, chain in (("G", oracle.graph_chain(graph)),
                        ("L(G)", oracle.graph_chain(oracle.line_graph(graph)))):
        for eps in EPS_GRID:
            r = {"chain": name, **sandwich(chain, eps)}
            sw.append(r)
            if not r["ok"]:
                report["violations"].append({"check": "sandwich", **r})
    report["sandwich"] = sw
    return report


def closed_form_bounds(graph: Graph, k: int, index=None) -> list:
    """Violations of d_v^(k-1)/(k-1)^(k-1) <= N_v <= (k-1)! Delta^(k-1)."""
    idx = index or oracle.enumerate_graphlets(graph, k)
    Nv = idx.per_vertex()
    D = int(graph.degrees.max()) if graph.n else 0
    bad = []
    for v in np.flatnonzero(Nv > 0).tolist():
        d = int(graph.degrees[v])
        lo = d ** (k - 1) / (k - 1) ** (k - 1)
        hi = math.factorial(k - 1) * D ** (k - 1)
        if not lo <= Nv[v] <= hi:
            bad.append({"v": v, "N_v": int(Nv[v]), "lower": lo, "upper": hi})
    return bad


def bounds(graph: Graph, ks=(3, 4)) -> dict:
    report = {"suite": "bounds", "n": graph.n, "m": graph.m, "violations": [], "per_k": []}
    for k in ks:
        if k > graph.n:
            continue
        idx = oracle.enumerate_graphlets(graph, k)
        row = {"k": k, "N_k": idx.N_k}
        for b in closed_form_bounds(graph, k, idx):
            report["violations"].append({"check": "closed_form_bounds", "k": k, **b})
        order = compute_dd(graph, k)
        sizes = idx.bucket_sizes(order.rank)
        if int(sizes.sum()) != idx.N_k:
            report["violations"].append({"check": "partition", "k": k})
        if not np.array_equal(order.b_base > 0, sizes > 0):
            report["violations"].append({"check": "nonempty_buckets", "k": k})
        if idx.N_k:
            s = UgsSampler(graph, k, order)
            worst_norm, acc_lo, acc_hi = 0.0, math.inf, 0.0
            for v, B in idx.buckets(order.rank).items():
                ps = [s.prob(g) for g in B]
                worst_norm = max(worst_norm, abs(sum(ps) - 1))
                d = int(order.deg_after[v])
                b = order.b[v]
                if not (b / math.factorial(k - 1) <= len(B) * (k - 1) ** (k - 1) and len(B) <= math.factorial(k - 1) * b):
                    report["violations"].append({"check": "bucket_size", "k": k, "v": v})
                for p in ps:
                    lo, hi = 1 / (math.factorial(k - 1) * d ** (k - 1)), math.factorial(k - 1) ** 3 / d ** (k - 1)
                    if not lo * (1 - 1e-12) <= p <= hi * (1 + 1e-12):
                        report["violations"].append({"check": "prob_bounds", "k": k, "v": v, "p": p})
                    a = s.coef / (b * p)
                    acc_lo, acc_hi = min(acc_lo, a), max(acc_hi, a)
            row.update({"max_norm_error": worst_norm, "acceptance_min": acc_lo, "acceptance_max": acc_hi})
            if worst_norm > 1e-9:
                report["violations"].append({"check": "normalization", "k": k, "error": worst_norm})
            if not (0 < acc_lo and acc_hi <= 1):
                report["violations"].append({"check": "acceptance", "k": k, "min": acc_lo, "max": acc_hi})
            if k >= 2 and graph.n <= 200:
                tsum, edges = oracle.t_sum_matches(graph, k)
                row.update({"sum_T": tsum, "edges_prev": edges})
                if tsum != edges:
                    report["violations"].append({"check": "T_sum", "k": k, "sum_T": tsum, "edges": edges})
        report["per_k"].append(row)
    return report


def walk(graph: Graph, k=3, steps=100_000, max_states=60, seed=0) -> dict:
    """Per-state transition law of the step kernel against the explicit chain."""
    report = {"suite": "walk", "n": graph.n, "m": graph.m, "k": k, "violations": []}
    chain = oracle.build_Gk(graph, k - 1)
    states = chain.states
    if k - 1 == 1:
        states = [(v,) for v in states]
    pos = {tuple(s): i for i, s in enumerate(states)}
    rw = RandomWalkSampler(graph, WalkConfig(k, 1))
    worst = 0.0
    for i, st in enumerate(states[:max_states]):
        if chain.W[i].sum() == 0:
            continue
        out = rw.steps_from(st, steps, seed=seed + i)
        emp = np.zeros(len(states))
        for row in out.tolist():
            emp[pos[tuple(row)]] += 1
        tv = oracle.tv_distance(emp / steps, chain.P[i])
        worst = max(worst, tv)
    report["max_state_tv"] = worst
    if worst > 0.02:
        report["violations"].append({"check": "transition_law", "tv": worst})
    tsum, edges = oracle.t_sum_matches(graph, k)
    report.update({"sum_T": tsum, "edges_prev": edges})
    if tsum != edges:
        report["violations"].append({"check": "T_sum", "sum_T": tsum, "edges": edges})
    return report


SUITES = {"spectral": spectral, "bounds": bounds, "walk": walk}
