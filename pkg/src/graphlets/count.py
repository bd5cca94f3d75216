"""Graphlet counts per isomorphism class by inverse-probability weighting."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import UnsupportedOperation, UsageError
from .graph import Graph
from .ugs import UgsSampler

MAX_ISO_K = 8


@lru_cache(maxsize=None)
def _perms(k):
    return np.array(list(itertools.permutations(range(k))), dtype=np.int64)


@lru_cache(maxsize=None)
def _pairs(k):
    return np.array(list(itertools.combinations(range(k), 2)), dtype=np.int64)


@lru_cache(maxsize=1 << 16)
def _canon(k, bits):
    """Smallest pair bitstring over all relabelings; pair (0,1) is the most significant bit."""
    pairs = _pairs(k)
    A = np.zeros((k, k), dtype=np.int64)
    for t, (a, b) in enumerate(pairs.tolist()):
        if bits >> (len(pairs) - 1 - t) & 1:
            A[a, b] = A[b, a] = 1
    P = _perms(k)
    rows = A[P[:, pairs[:, 0]], P[:, pairs[:, 1]]]  # (k!, C(k,2)) relabeled bitstrings
    weights = 1 << np.arange(len(pairs) - 1, -1, -1, dtype=np.int64)
    return int((rows * weights).sum(axis=1).min())


def adjacency_bits(graph: Graph, vertices) -> int:
    vs = sorted(int(v) for v in vertices)
    k = len(vs)
    bits = 0
    for a, b in itertools.combinations(range(k), 2):
        bits = (bits << 1) | int(graph.has_edge(vs[a], vs[b]))
    return bits


@dataclass(frozen=True, order=True)
class IsoClassId:
    k: int
    canonical_code: int

    def edges(self):
        pairs = _pairs(self.k).tolist()
        P = len(pairs)
        return [tuple(p) for t, p in enumerate(pairs) if self.canonical_code >> (P - 1 - t) & 1]

    def __str__(self):
        return f"{self.k}:{self.canonical_code}"


def classify_iso(graph: Graph, vertices) -> IsoClassId:
    k = len(vertices)
    if k > MAX_ISO_K:
        raise UnsupportedOperation(f"canonical codes enumerate k! relabelings; k <= {MAX_ISO_K}")
    return IsoClassId(k, _canon(k, adjacency_bits(graph, vertices)))


def connected_classes(k) -> list:
    """All connected k-vertex graphs up to isomorphism, by code."""
    pairs = _pairs(k).tolist()
    codes = set()
    for bits in range(1 << len(pairs)):
        adj = {i: set() for i in range(k)}
        for t, (a, b) in enumerate(pairs):
            if bits >> (len(pairs) - 1 - t) & 1:
                adj[a].add(b)
                adj[b].add(a)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == k:
            codes.add(_canon(k, bits))
    return [IsoClassId(k, c) for c in sorted(codes)]


# -- estimation ------------------------------------------------------------------

def bucket_samples(k, eps0, delta_b):
    """Draws per bucket: Hoeffding on weights in [0, (k-1)!^2] times the mean."""
    return math.ceil(2 * math.factorial(k - 1) ** 2 * eps0 ** -2 * math.log(2 / delta_b))


def frequency_samples(k, eps1, delta):
    return math.ceil(2 / eps1 ** 2 * (k * k * math.log(2) + math.log(1 / delta)))


@dataclass
class BucketEstimate:
    v: int
    estimate: float
    draws: int
    max_weight: float


def estimate_bucket_size(sampler: UgsSampler, v, eps0, delta_b, seed=0, draws=None) -> BucketEstimate:
    """Mean of 1/prob(S) over growth runs at v; unbiased for |B(v)|."""
    if sampler.order.b_base[v] == 0:
        raise UsageError(f"bucket of {v} is empty (b_v = 0)")
    ell = draws or bucket_samples(sampler.k, eps0, delta_b)
    _, probs = sampler.grow_many(v, ell, seed=seed)
    w = 1.0 / probs
    return BucketEstimate(int(v), float(w.mean()), ell, float(w.max()))


@dataclass
class CountReport:
    k: int
    N_hat_k: float
    f_hat: dict  # IsoClassId -> frequency
    eps0: float
    eps1: float
    delta: float
    seed: int
    samples_used: int
    buckets: list = field(default_factory=list, repr=False)

    def N_hat(self, cls) -> float:
        return self.N_hat_k * self.f_hat.get(cls, 0.0)

    def to_dict(self):
        return {
            "k": self.k,
            "N_hat_k": self.N_hat_k,
            "classes": [
                {"code": str(c), "edges": [list(e) for e in c.edges()],
                 "f_hat": f, "N_hat": self.N_hat_k * f}
                for c, f in sorted(self.f_hat.items())
            ],
            "eps0": self.eps0,
            "eps1": self.eps1,
            "delta": self.delta,
            "seed": self.seed,
            "samples_used": self.samples_used,
        }


def estimate_counts(graph: Graph, k, eps0, eps1, delta, seed=0, *, sampler=None, jobs=1,
                    bucket_draws=None, freq_draws=None) -> CountReport:
    """Estimate N_k and N_H for every class H seen.

    Each bucket gets failure budget delta/n, so it draws
    (k-1)!^2 * 2 * eps0^-2 * ln(2n/delta) growth runs; the class frequencies
    come from uniform samples.
    """
    if not (0 < eps0 and 0 < eps1 and 0 < delta < 1):
        raise UsageError("need eps0, eps1 > 0 and 0 < delta < 1")
    sampler = sampler or UgsSampler(graph, k)
    order = sampler.order
    if order.Z == 0:
        return CountReport(k, 0.0, {}, eps0, eps1, delta, seed, 0)
    delta_b = delta / graph.n
    buckets = []
    for v in np.flatnonzero(order.b_base > 0).tolist():
        buckets.append(estimate_bucket_size(sampler, v, eps0, delta_b, seed=seed, draws=bucket_draws))
    N_hat = float(sum(b.estimate for b in buckets))
    nf = freq_draws or frequency_samples(k, eps1, delta)
    samples, _ = sampler.sample(nf, seed=seed, jobs=jobs)
    counts = {}
    for row in samples.tolist():
        c = classify_iso(graph, row)
        counts[c] = counts.get(c, 0) + 1
    f_hat = {c: n / nf for c, n in counts.items()}
    used = nf + sum(b.draws for b in buckets)
    return CountReport(k, N_hat, f_hat, eps0, eps1, delta, seed, used, buckets)
