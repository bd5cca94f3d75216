"""Command-line front end.

Exit codes: 0 success, 1 a verification found violations, 2 usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import bench, oracle, verify
from .errors import EmptyInstanceError, GraphletError
from .graph import from_spec, load_edge_list
from .order import DDOrder, compute_apx_dd, compute_dd


def _graph(args):
    if args.gen:
        return from_spec(args.gen)
    if args.graph and args.graph != "-":
        with open(args.graph) as fh:
            return load_edge_list(fh)
    return load_edge_list(sys.stdin)


def _order(args, graph, mode, beta=None):
    path = args.order_cache
    if path and os.path.exists(path):
        o = DDOrder.load(path, graph)
        if o.k != args.k or o.mode != mode:
            raise GraphletError(f"order cache holds a cached {o.mode} order for k={o.k}")
        return o
    o = compute_dd(graph, args.k) if mode == "exact" else compute_apx_dd(graph, args.k, beta, args.seed)
    if path:
        o.save(path, graph)
    return o


def _emit_ledger(args, graph):
    if args.ledger:
        print(json.dumps({"ledger": graph.ledger.snapshot(), "seed": args.seed}), file=sys.stderr)


def _json(obj, fh=None):
    print(json.dumps(obj, default=float), file=fh or sys.stdout)


def cmd_sample(args):
    g = _graph(args)
    if args.algo == "ugs":
        from .ugs import UgsSampler
        s = UgsSampler(g, args.k, _order(args, g, "exact"))
        out, stats = s.sample(args.samples, seed=args.seed, jobs=args.jobs)
        extra = {"mean_trials": stats.mean_trials}
    elif args.algo == "apx-ugs":
        from .apx import ApxUgsConfig, ApxUgsSampler
        cfg = ApxUgsConfig(args.k, args.eps, C1=args.c1, C2=args.c2)
        s = ApxUgsSampler(g, args.k, args.eps, args.seed, config=cfg,
                          order=_order(args, g, "apx", cfg.beta))
        out, stats = s.sample(args.samples, seed=args.seed, jobs=args.jobs)
        extra = {"mean_trials": stats.mean_trials, "fails": stats.fails, "degraded": stats.degraded}
    else:
        from .walk import RandomWalkSampler, WalkConfig, oracle_t_mix
        if args.steps is None:
            raise GraphletError("--steps is required for --algo rw (an integer, or 'auto' on small graphs)")
        t = oracle_t_mix(g, args.k, args.eps) if args.steps == "auto" else int(args.steps)
        s = RandomWalkSampler(g, WalkConfig(args.k, t, args.eps))
        out = s.sample(args.samples, seed=args.seed)
        extra = {"t_mix": t, "steps": int(s.steps)}
    if args.format == "json":
        _json({"algo": args.algo, "k": args.k, "seed": args.seed, "samples": out.tolist(), **extra})
    else:
        sys.stdout.write("".join(" ".join(map(str, r)) + "\n" for r in out.tolist()))
    _emit_ledger(args, g)
    return 0


def cmd_count(args):
    from .count import estimate_counts
    from .ugs import UgsSampler
    g = _graph(args)
    s = UgsSampler(g, args.k, _order(args, g, "exact"))
    r = estimate_counts(g, args.k, args.eps0, args.eps1, args.delta, seed=args.seed, sampler=s,
                        jobs=args.jobs)
    _json(r.to_dict())
    _emit_ledger(args, g)
    return 0


def cmd_enumerate(args):
    g = _graph(args)
    idx = oracle.enumerate_graphlets(g, args.k)
    sys.stdout.write("".join(" ".join(map(str, t)) + "\n" for t in idx.all))
    return 0


def cmd_verify(args):
    g = _graph(args)
    if args.suite == "bounds":
        rep = verify.bounds(g, ks=tuple(args.k_list))
    elif args.suite == "walk":
        rep = verify.walk(g, k=args.k or 3, steps=args.steps_per_state, seed=args.seed)
    else:
        rep = verify.spectral(g)
    rep["seed"] = args.seed
    rep["ok"] = not rep["violations"]
    _json(rep)
    return 0 if rep["ok"] else 1


def cmd_bench(args):
    rows = []
    if args.what == "apx-dd":
        rows = bench.apx_dd_scaling(args.sizes, k=args.k or 3, beta=args.beta, seed=args.seed,
                                    exhaustive=args.exhaustive, h=args.h)
        rows.append(bench.fit_row(rows))
    else:
        g = _graph(args)
        k = args.k or 3
        if args.what == "ugs-pre":
            rows = [bench.ugs_preprocessing(g, k)]
        elif args.what == "backends":
            rows = bench.backends(g, k, samples=args.samples or 2000, seed=args.seed)
        else:
            from .ugs import UgsSampler
            rows = [bench.ugs_preprocessing(g, k)]
            rows.append(bench.sampling(UgsSampler(g, k), args.samples or 10000, seed=args.seed))
    for r in rows:
        _json(r)
    return 0


def cmd_preprocess(args):
    g = _graph(args)
    if args.mode == "exact":
        o = compute_dd(g, args.k)
    else:
        o = compute_apx_dd(g, args.k, args.beta, args.seed)
    o.save(args.out, g)
    _json({"out": args.out, "mode": o.mode, "k": o.k, "Z": str(o.Z), "seed": args.seed,
           "ledger": g.ledger.snapshot()})
    return 0


def _sizes(s):
    return tuple(int(x) for x in s.split(","))


def build_parser():
    p = argparse.ArgumentParser(prog="graphlets", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--graph", help="edge-list path ('-' or omitted: stdin)")
        src.add_argument("--gen", help="generator, e.g. er:25,0.25,7 or lollipop:3,2,3")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--ledger", action="store_true", help="dump query counts as JSON on stderr")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--order-cache", dest="order_cache")

    s = sub.add_parser("sample", help="draw graphlets")
    graph_args(s)
    s.add_argument("--algo", choices=["ugs", "apx-ugs", "rw"], default="ugs")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--samples", type=int, default=1)
    s.add_argument("--eps", type=float, default=0.2)
    s.add_argument("--c1", type=float, default=0.25)
    s.add_argument("--c2", type=float, default=1.0)
    s.add_argument("--steps", help="walk steps per sample, or 'auto'")
    s.add_argument("--format", choices=["ids", "json"], default="ids")
    s.set_defaults(fn=cmd_sample)

    c = sub.add_parser("count", help="estimate graphlet counts per isomorphism class")
    graph_args(c)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--eps0", type=float, default=0.1)
    c.add_argument("--eps1", type=float, default=0.1)
    c.add_argument("--delta", type=float, default=0.1)
    c.set_defaults(fn=cmd_count)

    e = sub.add_parser("enumerate", help="list every k-graphlet")
    graph_args(e)
    e.add_argument("--k", type=int, required=True)
    e.set_defaults(fn=cmd_enumerate)

    v = sub.add_parser("verify", help="run an invariant suite on the graph")
    graph_args(v)
    v.add_argument("--suite", choices=sorted(verify.SUITES), default="spectral")
    v.add_argument("--k", type=int)
    v.add_argument("--k-list", dest="k_list", type=_sizes, default=(3, 4))
    v.add_argument("--steps-per-state", dest="steps_per_state", type=int, default=100_000)
    v.set_defaults(fn=cmd_verify)

    b = sub.add_parser("bench", help="timings and query totals as JSON rows")
    graph_args(b)
    b.add_argument("--what", choices=["apx-dd", "ugs-pre", "backends", "sample"], default="apx-dd")
    b.add_argument("--sizes", type=_sizes, default=(500, 1000, 2000))
    b.add_argument("--k", type=int)
    b.add_argument("--beta", type=float, default=0.25)
    b.add_argument("--h", type=int)
    b.add_argument("--sampled-only", dest="exhaustive", action="store_false",
                   help="always draw h neighbor samples, even when a list is shorter than h")
    b.add_argument("--samples", type=int)
    b.set_defaults(fn=cmd_bench)

    pp = sub.add_parser("preprocess", help="build and cache a vertex order")
    graph_args(pp)
    pp.add_argument("--k", type=int, required=True)
    pp.add_argument("--mode", choices=["exact", "apx"], default="exact")
    pp.add_argument("--beta", type=float, default=0.25)
    pp.add_argument("--out", required=True)
    pp.set_defaults(fn=cmd_preprocess)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except EmptyInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GraphletError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
