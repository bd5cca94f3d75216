"""Approximately uniform sampling on an approximate order, without sorted adjacency."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend, _pykernels
from ._ctx import ApxCtx, alias_arrays
from .errors import EmptyInstanceError, UsageError
from .graph import Graph, Graphlet
from .order import DDOrder, compute_apx_dd
from .rand import Uniforms, as_generator
from .ugs import SampleStats, check_k, run_blocks

SAMPLING_LIMIT = 10 ** 8  # largest h we are willing to draw one neighbor at a time


@dataclass(frozen=True)
class ApxUgsConfig:
    """Derived constants of the approximate sampler.

    ``h_override`` replaces both per-vertex sample counts and ``ell_override``
    the acceptance threshold on the hit count X; ``exhaustive``
    lets a vertex with degree at most h be read in full instead of sampled.
    ``C1`` sets the acceptance scale beta * k^(-C1 k); ``C2`` the accuracy
    gamma = rho = eps^3 k^(-C2 k).
    """

    k: int
    eps: float
    C1: float = 0.25
    C2: float = 1.0
    prob_fail_exp: float = 2.0  # failure budget beta / k^(prob_fail_exp * k) inside apx_prob
    h_override: int | None = None
    ell_override: float | None = None
    exhaustive: bool = True
    trial_cap_override: int | None = None

    def __post_init__(self):
        if not 0 < self.eps <= 1:
            raise UsageError("0 < eps <= 1 required")
        if not 0 < self.gamma < 1:
            raise UsageError("gamma must lie in (0, 1)")

    @property
    def beta(self):
        return self.eps / 2

    @property
    def alpha(self):
        return self.beta ** (1.0 / (self.k - 1)) / (6 * self.k ** 3)

    @property
    def gamma(self):
        return self.eps ** 3 * float(self.k) ** (-self.C2 * self.k)

    rho = gamma

    @property
    def delta_grow(self):
        return self.gamma / (50 * self.k ** 4)

    @property
    def delta_prob(self):
        return self.rho / (50 * self.k ** 3)

    def ell(self, delta):
        if self.ell_override is not None:
            return float(self.ell_override)
        return 1.0 / (self.k * delta * self.alpha ** 2)

    def h(self, delta, fail_beta, mult=1):
        if self.h_override is not None:
            return float(self.h_override)
        ell = self.ell(delta)
        return float(mult * math.ceil(ell * ell * math.log(self.k / fail_beta)))

    @property
    def ell_grow(self):
        return self.ell(self.delta_grow)

    @property
    def h_grow(self):
        return self.h(self.delta_grow, self.beta)

    @property
    def prob_fail(self):
        return self.beta / float(self.k) ** (self.prob_fail_exp * self.k)

    @property
    def ell_prob(self):
        return self.ell(self.delta_prob)

    @property
    def h_prob(self):
        return self.h(self.delta_prob, self.prob_fail, mult=self.k)

    @property
    def trial_cap(self):
        if self.trial_cap_override is not None:
            return int(self.trial_cap_override)
        return 64 * self.k * math.ceil(1.0 / (3 * self.k * self.alpha ** 2))

    @property
    def coef(self):
        return self.beta * float(self.k) ** (-self.C1 * self.k)

    def summary(self):
        return {"eps": self.eps, "k": self.k, "beta": self.beta, "alpha": self.alpha,
                "gamma": self.gamma, "C1": self.C1, "C2": self.C2,
                "ell_grow": self.ell_grow, "h_grow": self.h_grow,
                "ell_prob": self.ell_prob, "h_prob": self.h_prob,
                "trial_cap": self.trial_cap, "exhaustive": self.exhaustive}


@dataclass
class CutEstimates:
    v: int
    U: tuple
    c_hat: dict
    ell: float
    h: float
    delta: float

    @property
    def total(self):
        return sum(self.c_hat.values())


@dataclass
class ApxStats(SampleStats):
    fails: int = 0
    degraded: int = 0


class ApxUgsSampler:
    def __init__(self, graph: Graph, k: int, eps: float, seed=0, *, config: ApxUgsConfig | None = None,
                 order: DDOrder | None = None, backend=None, **cfg):
        check_k(k)
        self.config = config or ApxUgsConfig(k, eps, **cfg)
        if order is None:
            order = compute_apx_dd(graph, k, self.config.beta, seed)
        if order.mode != "apx" or order.s is None:
            raise UsageError("the approximate sampler needs an order from compute_apx_dd")
        self.graph = graph
        self.k = k
        self.order = order
        self.backend = backend
        self._ctx = None
        c = self.config
        for h in (c.h_grow, c.h_prob):
            if not c.exhaustive and h > SAMPLING_LIMIT:
                raise UsageError(f"h={h:.3g} is infeasible without exhaustive reads; set h_override")

    @property
    def ctx(self) -> ApxCtx:
        if self._ctx is None:
            o, g, c = self.order, self.graph, self.config
            sup, prob, alias = alias_arrays(o.bucket_sampler)
            self._ctx = ApxCtx(self.k, g.indptr, g.indices, np.ascontiguousarray(g.degrees),
                               np.ascontiguousarray(o.s, dtype=np.float64), o.b, sup, prob, alias,
                               c.coef, c.ell_grow, c.h_grow, c.ell_prob, c.h_prob, c.trial_cap,
                               c.exhaustive)
        return self._ctx

    def _check_v(self, v):
        if not 0 <= v < self.graph.n or self.order.b_base[v] == 0:
            raise UsageError(f"vertex {v} has b_v = 0")

    def succeeds(self, x, v):
        s = self.order.s
        return bool(s[x] < s[v] or (s[x] == s[v] and x < v))

    # -- reference API -----------------------------------------------------

    def estimate_cuts(self, v, U, rng=None, *, delta=None, h=None, ell=None) -> CutEstimates:
        """Estimates of |Cut(u, G(v) minus U)| for u in U."""
        self._check_v(v)
        U = [int(u) for u in U]
        if v not in U or len(U) >= self.k:
            raise UsageError("need v in U and |U| < k")
        c = self.config
        delta = c.delta_grow if delta is None else delta
        ell = c.ell(delta) if ell is None else ell
        h = c.h(delta, c.beta) if h is None else float(h)
        q = [0, 0, 0]
        est = _pykernels.estimate_cuts(self.ctx.lists(), v, U, ell, h, Uniforms(as_generator(rng)), q)
        self.graph.ledger.add(*q)
        return CutEstimates(v, tuple(U), dict(zip(U, est)), ell, h, delta)

    def apx_rand_grow(self, v, rng=None):
        """A grown vertex tuple (insertion order), or None for FAIL."""
        self._check_v(v)
        q = [0, 0, 0]
        S = _pykernels.apx_rand_grow(self.ctx.lists(), int(v), Uniforms(as_generator(rng)), q)
        self.graph.ledger.add(*q)
        return None if S is None else tuple(S)

    def owner(self, S):
        return min(S, key=lambda x: self.order.rank[x])

    def apx_prob(self, S, rng=None):
        """(estimate of prob(S), degraded flag)."""
        S = [int(x) for x in S]
        if len(S) != self.k or not self.graph.induced_connected(S):
            raise UsageError("S must be a connected k-set")
        o = self.owner(S)
        self._check_v(o)
        q = [0, 0, 0]
        ordered = [o] + [x for x in S if x != o]
        p, bad = _pykernels.apx_prob(self.ctx.lists(), ordered, Uniforms(as_generator(rng)), q)
        self.graph.ledger.add(*q)
        return p, bad

    # -- batch ---------------------------------------------------------------

    def sample_eps_uniform(self, rng=None) -> Graphlet:
        if self.order.Z == 0:
            raise EmptyInstanceError(f"graph has no {self.k}-graphlet deemed reachable")
        out, _, _, q = _backend.kernels(self.backend).apx_trials(self.ctx, as_generator(rng), 1)
        self.graph.ledger.add(*q)
        return Graphlet(tuple(out[0].tolist()))

    def sample(self, n, seed=0, jobs=1):
        if self.order.Z == 0:
            raise EmptyInstanceError(f"graph has no {self.k}-graphlet deemed reachable")
        K = _backend.kernels(self.backend)
        ctx = self.ctx
        parts = run_blocks(lambda gen, c: K.apx_trials(ctx, gen, c), n, seed, jobs)
        if not parts:
            return np.empty((0, self.k), np.int32), ApxStats(np.empty(0, np.int64), np.zeros(3, np.int64))
        out = np.concatenate([p[0] for p in parts])
        trials = np.concatenate([p[1] for p in parts])
        st = sum(p[2] for p in parts)
        q = sum(p[3] for p in parts)
        self.graph.ledger.add(*q)
        return out, ApxStats(trials, q, int(st[0]), int(st[1]))

    def grow_many(self, v, n, seed=0):
        """n runs of the approximate growing process at v; FAIL rows are -1."""
        self._check_v(v)
        K = _backend.kernels(self.backend)
        ctx = self.ctx
        parts = run_blocks(lambda gen, c: K.apx_grow_batch(ctx, gen, int(v), c), n, seed,
                           stream_id=1 + int(v))
        self.graph.ledger.add(*sum(p[1] for p in parts))
        return np.concatenate([p[0] for p in parts])
