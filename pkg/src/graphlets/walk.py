"""Random-walk sampler: lazy walk on (k-1)-graphlets, edges turned into k-graphlets."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _backend, _pykernels
from ._ctx import WalkCtx
from .errors import EmptyInstanceError, UsageError
from .graph import Graph, Graphlet
from .rand import Uniforms, as_generator, stream


@dataclass(frozen=True)
class WalkConfig:
    k: int
    t_mix: int
    eps: float = 0.1

    def __post_init__(self):
        if self.k < 2:
            raise UsageError("k >= 2 required")
        if self.t_mix < 1:
            raise UsageError("t_mix >= 1 required")


@dataclass
class WalkState:
    current: tuple
    steps_taken: int = 0
    rng: np.random.Generator = field(default_factory=np.random.default_rng, repr=False)


def _ctx(graph: Graph, k, t_mix=1) -> WalkCtx:
    return WalkCtx(k, graph.indptr, graph.indices, np.ascontiguousarray(graph.degrees), t_mix)


def find_start(graph: Graph, j: int, rng=None) -> Graphlet:
    """A connected j-vertex set grown by BFS from random vertices."""
    if j < 1:
        raise UsageError("j >= 1 required")
    rng = as_generator(rng)
    adj = graph.adj_lists()
    for s in rng.permutation(graph.n).tolist():
        seen = [s]
        member = {s}
        i = 0
        while i < len(seen) and len(seen) < j:
            for w in adj[seen[i]]:
                if w not in member:
                    member.add(w)
                    seen.append(w)
                    if len(seen) == j:
                        break
            i += 1
        if len(seen) == j:
            return Graphlet(tuple(seen))
    raise EmptyInstanceError(f"no connected {j}-vertex subgraph")


def walk_step(graph: Graph, state: WalkState) -> WalkState:
    """One lazy step on the (k-1)-graphlet graph; raises if the state is isolated."""
    L = _ctx(graph, len(state.current) + 1).lists()
    q = [0, 0, 0]
    nxt = _pykernels.walk_step(L, list(state.current), Uniforms(state.rng, chunk=64), q)
    graph.ledger.add(*q)
    if nxt is None:
        raise EmptyInstanceError(f"state {state.current} has no neighbor in the graphlet graph")
    return WalkState(tuple(nxt), state.steps_taken + 1, state.rng)


def compute_T(graph: Graph, g) -> int:
    """Pairs {x, y} of g with g-x, g-y and g-{x,y} all connected."""
    g = [int(x) for x in g]
    q = [0, 0, 0]
    t = _pykernels.compute_T(_ctx(graph, len(g)).lists(), g, q)
    graph.ledger.add(*q)
    return t


class RandomWalkSampler:
    """Near-uniform k-graphlets from a lazy walk over (k-1)-graphlets.

    After ``t_mix`` steps one forced move gives an edge {X, Z} of the
    graphlet graph; X u Z is kept with probability 1/|T(X u Z)|, otherwise
    the walk runs ``t_mix`` more steps and tries again.
    """

    def __init__(self, graph: Graph, config: WalkConfig, backend=None):
        if config.k - 1 > 15:
            raise UsageError("k too large for the walk kernels")
        self.graph = graph
        self.config = config
        self.backend = backend
        if not graph.is_connected():
            warnings.warn("graph is disconnected; only the start component is sampled", stacklevel=2)
        self.ctx = _ctx(graph, config.k, config.t_mix)
        self.state = None
        self.attempts = None
        self.steps = 0

    def sample(self, n, seed=0, start=None):
        """n samples from one continuing walk; returns an (n, k) array."""
        j = self.config.k - 1
        g0 = start if start is not None else find_start(self.graph, j, stream(seed, 0))
        g0 = np.asarray(list(g0), dtype=np.int32)
        if g0.shape[0] != j:
            raise UsageError(f"start state must have {j} vertices")
        K = _backend.kernels(self.backend)
        out, att, final, steps, status, q = K.walk_run(self.ctx, stream(seed, 1), g0, int(n))
        self.graph.ledger.add(*q)
        self.state = tuple(final.tolist())
        self.attempts = att
        self.steps = steps
        if status < 0:
            raise EmptyInstanceError(f"walk stuck at isolated state {self.state}")
        return out

    def steps_from(self, g, n, seed=0):
        """n independent single lazy steps from state g (rows sorted, -1 if isolated)."""
        K = _backend.kernels(self.backend)
        out, q = K.walk_steps_from(self.ctx, stream(seed, 2), np.asarray(list(g), np.int32), int(n))
        self.graph.ledger.add(*q)
        return out


def sample_rw(graph: Graph, config: WalkConfig, rng=None) -> Graphlet:
    seed = int(as_generator(rng).integers(2 ** 63))
    out = RandomWalkSampler(graph, config).sample(1, seed=seed)
    return Graphlet(tuple(out[0].tolist()))


def oracle_t_mix(graph: Graph, k: int, eps: float) -> int:
    """Exact t_{eps/k^2} of the lazy walk on (k-1)-graphlets (small graphs only)."""
    from .oracle import build_Gk, eps_mixing_time
    return max(1, eps_mixing_time(build_Gk(graph, k - 1), eps / k ** 2))
