"""Exact uniform graphlet sampling by growing inside degree-dominated subgraphs."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend, _pykernels
from ._ctx import UgsCtx, alias_arrays
from .errors import EmptyInstanceError, UsageError
from .graph import Graph, Graphlet
from .order import DDOrder, compute_dd
from .rand import BLOCK, Uniforms, as_generator, stream

DEFAULT_MAX_K = 10


@dataclass
class GrowTrace:
    """One run of the growing process.

    ``sets[i]`` is S_{i+1}; step i picked ``chosen[i]`` with probability
    proportional to ``cuts[i][u]`` out of ``totals[i]`` and added ``added[i]``.
    """

    v: int
    sets: list
    chosen: list
    added: list
    cuts: list
    totals: list

    @property
    def vertices(self):
        return tuple(sorted(self.sets[-1]))


@dataclass
class SampleStats:
    trials: np.ndarray
    queries: np.ndarray

    @property
    def mean_trials(self):
        return float(self.trials.mean()) if self.trials.size else math.nan


def check_k(k, max_k=DEFAULT_MAX_K):
    if k < 2:
        raise UsageError("k >= 2 required")
    if k > max_k:
        raise UsageError(f"k={k} exceeds max_k={max_k}; probability evaluation costs 2^k * k^2 per sample")
    if k > 8:
        warnings.warn(f"k={k}: per-sample cost grows as 2^k k^2", stacklevel=3)


def run_blocks(fn, n, seed, jobs=1, stream_id=0):
    """Call fn(generator, count) per block of BLOCK samples; results in block order."""
    blocks = [(b, min(BLOCK, n - b * BLOCK)) for b in range((n + BLOCK - 1) // BLOCK)]
    work = lambda bc: fn(stream(seed, stream_id, bc[0]), bc[1])
    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(work, blocks))
    return [work(bc) for bc in blocks]


class UgsSampler:
    """Rejection sampler that is exactly uniform over k-graphlets.

    ``coef`` is the acceptance numerator: the acceptance probability of a
    grown set S from bucket v is min(1, coef / (b_v * prob(S))).  The default
    1/k! together with an exact order gives uniform output with no clamping.
    """

    def __init__(self, graph: Graph, k: int, order: DDOrder | None = None, *, coef=None,
                 max_k=DEFAULT_MAX_K, backend=None):
        check_k(k, max_k)
        if order is None:
            order = compute_dd(graph, k)
        if order.k != k:
            raise UsageError(f"order was built for k={order.k}, not {k}")
        if not order.has_sorted_view:
            order = order.with_sorted_view(graph)
        self.graph = graph
        self.k = k
        self.order = order
        self.coef = 1.0 / math.factorial(k) if coef is None else float(coef)
        self.backend = backend
        self._ctx = None

    @property
    def beta_k(self):
        return self.order.beta_k

    @property
    def ctx(self) -> UgsCtx:
        if self._ctx is None:
            o, g = self.order, self.graph
            sup, prob, alias = alias_arrays(o.bucket_sampler)
            self._ctx = UgsCtx(self.k, g.indptr, g.indices, np.ascontiguousarray(g.degrees),
                               o.adj_rank, o.order, o.rank, o.deg_after, o.b, sup, prob, alias,
                               self.coef)
        return self._ctx

    def _require_nonempty(self):
        if self.order.Z == 0:
            raise EmptyInstanceError(f"graph has no {self.k}-graphlet")

    # -- single-shot reference API -----------------------------------------

    def rand_grow(self, v, rng=None, *, check_bounds=False) -> GrowTrace:
        if not 0 <= v < self.graph.n or self.order.b_base[v] == 0:
            raise UsageError(f"vertex {v} has an empty bucket (b_v = 0)")
        L = self.ctx.lists()
        raw = []
        q = [0, 0, 0]
        S = _pykernels.rand_grow(L, int(v), Uniforms(as_generator(rng)), q, trace=raw)
        self.graph.ledger.add(*q)
        sets = [tuple(S[:i + 1]) for i in range(self.k)]
        tr = GrowTrace(int(v), sets, [r[0] for r in raw], [r[1] for r in raw],
                       [r[2] for r in raw], [r[3] for r in raw])
        if check_bounds:
            d = int(self.order.deg_after[v])
            for i, c in enumerate(tr.totals, start=1):
                if not d / i <= c <= i * d:
                    raise AssertionError(f"cut {c} at step {i} outside [{d}/{i}, {i}*{d}]")
        return tr

    def owner(self, S):
        return min(S, key=lambda x: self.order.rank[x])

    def prob(self, S, v=None) -> float:
        """Probability that the growing process at the bucket owner of S returns S."""
        S = [int(x) for x in S]
        if len(S) != self.k or len(set(S)) != self.k:
            raise UsageError(f"need {self.k} distinct vertices")
        if not self.graph.induced_connected(S):
            raise UsageError(f"{sorted(S)} is not connected")
        o = self.owner(S)
        if v is not None and v != o:
            raise UsageError(f"v={v} is not the bucket owner of {sorted(S)} (owner {o})")
        if self.order.b_base[o] == 0:
            raise UsageError(f"bucket of {o} is deemed empty")
        ordered = [o] + [x for x in S if x != o]
        q = [0, 0, 0]
        p = _pykernels.prob(self.ctx.lists(), ordered, q)
        self.graph.ledger.add(*q)
        return p

    def acceptance(self, S) -> float:
        o = self.owner(S)
        return self.coef / (self.order.b[o] * self.prob(S))

    # -- batch sampling ------------------------------------------------------

    def sample_uniform(self, rng=None) -> Graphlet:
        self._require_nonempty()
        out, _, q = _backend.kernels(self.backend).ugs_trials(self.ctx, as_generator(rng), 1)
        self.graph.ledger.add(*q)
        return Graphlet(tuple(out[0].tolist()))

    def sample(self, n, seed=0, jobs=1):
        """n independent uniform graphlets as an (n, k) array, plus trial stats."""
        self._require_nonempty()
        K = _backend.kernels(self.backend)
        ctx = self.ctx
        parts = run_blocks(lambda gen, c: K.ugs_trials(ctx, gen, c), n, seed, jobs)
        return self._merge(parts, n)

    def _merge(self, parts, n):
        if not parts:
            return np.empty((0, self.k), np.int32), SampleStats(np.empty(0, np.int64), np.zeros(3, np.int64))
        out = np.concatenate([p[0] for p in parts])
        trials = np.concatenate([p[1] for p in parts])
        q = sum(p[-1] for p in parts)
        self.graph.ledger.add(*q)
        return out, SampleStats(trials, q)

    def grow_many(self, v, n, seed=0):
        """n runs of the growing process at v: (sets, their probabilities)."""
        if self.order.b_base[v] == 0:
            raise UsageError(f"vertex {v} has an empty bucket")
        K = _backend.kernels(self.backend)
        ctx = self.ctx
        parts = run_blocks(lambda gen, c: K.grow_batch(ctx, gen, int(v), c), n, seed,
                           stream_id=1 + int(v))
        self.graph.ledger.add(*sum(p[2] for p in parts))
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
