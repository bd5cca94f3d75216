"""Brute-force ground truth: enumeration, graphlet graphs, chains and spectra.

Everything here is dense and exact, meant for graphs with at most a few
thousand graphlets.  The samplers are validated against it.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import GuardExceeded, UsageError
from .graph import Graph

ENUM_GUARD = 10 ** 7
CHAIN_GUARD = 5000


# -- enumeration -----------------------------------------------------------

@dataclass
class GraphletIndex:
    k: int
    n: int
    all: list  # sorted tuples

    def __post_init__(self):
        self.position = {g: i for i, g in enumerate(self.all)}

    @property
    def N_k(self):
        return len(self.all)

    def buckets(self, rank) -> dict:
        """v -> sorted list of graphlets whose earliest vertex under ``rank`` is v."""
        out = defaultdict(list)
        for g in self.all:
            out[min(g, key=lambda x: rank[x])].append(g)
        return dict(out)

    def bucket_sizes(self, rank) -> np.ndarray:
        sizes = np.zeros(self.n, dtype=np.int64)
        for g in self.all:
            sizes[min(g, key=lambda x: rank[x])] += 1
        return sizes

    def per_vertex(self) -> np.ndarray:
        """N_v: number of graphlets containing v."""
        c = np.zeros(self.n, dtype=np.int64)
        for g in self.all:
            for v in g:
                c[v] += 1
        return c

    def uniform(self) -> np.ndarray:
        return np.full(self.N_k, 1.0 / self.N_k)


def enumerate_graphlets(graph: Graph, k: int, guard=ENUM_GUARD) -> GraphletIndex:
    """All connected induced k-vertex subgraphs, each found once (ESU)."""
    if k < 1:
        raise UsageError("k >= 1 required")
    adj = [set(a) for a in graph.adj_lists()]
    out = []

    def extend(sub, ext, closed, root):
        if len(sub) == k:
            out.append(tuple(sorted(sub)))
            if len(out) > guard:
                raise GuardExceeded(f"more than {guard} graphlets")
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            fresh = [u for u in adj[w] if u > root and u not in closed]
            extend(sub + [w], ext + fresh, closed | adj[w] | {w}, root)

    for v in range(graph.n):
        extend([v], [u for u in adj[v] if u > v], adj[v] | {v}, v)
    out.sort()
    return GraphletIndex(k, graph.n, out)


def enumerate_brute(graph: Graph, k: int) -> list:
    """Every k-subset tested for connectivity; tiny graphs only."""
    if math.comb(graph.n, k) > 2_000_000:
        raise GuardExceeded("too many subsets for brute force")
    return [c for c in itertools.combinations(range(graph.n), k) if graph.induced_connected(c)]


# -- graphlet graphs and chains --------------------------------------------

@dataclass
class ChainMatrix:
    """Lazy random walk P = (P0 + I)/2 over an explicit state graph."""

    states: list
    W: np.ndarray  # symmetric 0/1 adjacency of the state graph
    P: np.ndarray
    pi: np.ndarray

    @property
    def size(self):
        return len(self.states)

    @property
    def pi_min(self):
        return float(self.pi.min())

    @property
    def n_edges(self):
        return int(np.triu(self.W, 1).sum())

    def is_connected(self) -> bool:
        s = self.size
        if s == 0:
            return False
        seen = np.zeros(s, dtype=bool)
        seen[0] = True
        frontier = np.array([0])
        while frontier.size:
            nxt = np.flatnonzero((self.W[frontier].sum(axis=0) > 0) & ~seen)
            seen[nxt] = True
            frontier = nxt
        return bool(seen.all())

    def check(self, tol_rows=1e-12, tol_rev=1e-10):
        if np.abs(self.P.sum(axis=1) - 1).max() > tol_rows:
            raise UsageError("rows do not sum to 1")
        Q = self.pi[:, None] * self.P
        if np.abs(Q - Q.T).max() > tol_rev:
            raise UsageError("chain is not reversible")


def lazy_chain(states, W) -> ChainMatrix:
    W = np.asarray(W, dtype=np.float64)
    s = W.shape[0]
    if s == 1:
        return ChainMatrix(list(states), W, np.ones((1, 1)), np.ones(1))
    deg = W.sum(axis=1)
    if np.any(deg == 0):
        raise UsageError("state graph has an isolated state")
    P = 0.5 * (W / deg[:, None] + np.eye(s))
    return ChainMatrix(list(states), W, P, deg / deg.sum())


def graph_chain(graph: Graph) -> ChainMatrix:
    if graph.n > CHAIN_GUARD:
        raise GuardExceeded("graph too large for a dense chain")
    W = np.zeros((graph.n, graph.n))
    e = graph.edges()
    W[e[:, 0], e[:, 1]] = W[e[:, 1], e[:, 0]] = 1
    return lazy_chain(list(range(graph.n)), W)


def build_Gk(graph: Graph, k: int, index: GraphletIndex | None = None, guard=CHAIN_GUARD):
    """The graphlet graph on k-graphlets and its lazy chain.

    Two graphlets are adjacent iff their intersection is a connected
    (k-1)-graphlet.  For k = 1 this is G itself.  Graphlets are grouped by
    their connected (k-1)-subsets; members of one group are pairwise adjacent.
    """
    if k == 1:
        return graph_chain(graph)
    idx = index or enumerate_graphlets(graph, k)
    if idx.N_k > guard:
        raise GuardExceeded(f"{idx.N_k} states exceed the chain guard {guard}")
    if idx.N_k == 0:
        raise UsageError("no graphlets")
    groups = defaultdict(list)
    for i, g in enumerate(idx.all):
        for x in g:
            rest = tuple(v for v in g if v != x)
            if graph.induced_connected(rest):
                groups[rest].append(i)
    W = np.zeros((idx.N_k, idx.N_k))
    for members in groups.values():
        for a, b in itertools.combinations(members, 2):
            W[a, b] = W[b, a] = 1
    return lazy_chain(idx.all, W)


def line_graph(graph: Graph) -> Graph:
    if graph.m < 1:
        raise UsageError("line graph needs m >= 1")
    e = graph.edges()
    incident = defaultdict(list)
    for i, (u, v) in enumerate(e.tolist()):
        incident[u].append(i)
        incident[v].append(i)
    pairs = {(a, b) for es in incident.values() for a, b in itertools.combinations(es, 2)}
    return Graph.from_edges(graph.m, np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2))


# -- spectra and mixing ----------------------------------------------------

def relaxation_time(chain: ChainMatrix) -> float:
    """1 / (1 - lambda*) from the symmetrized spectrum of a reversible chain."""
    if chain.size == 1:
        return 1.0
    if not chain.is_connected():
        raise UsageError("chain is not ergodic (disconnected state graph)")
    chain.check()
    r = np.sqrt(chain.pi)
    S = r[:, None] * chain.P / r[None, :]
    lam = np.linalg.eigvalsh(0.5 * (S + S.T))
    lam_star = np.abs(lam[:-1]).max()  # drop the top eigenvalue 1
    return float(1.0 / (1.0 - lam_star))


def _worst_tv(M, pi):
    return 0.5 * float(np.abs(M - pi[None, :]).sum(axis=1).max())


def eps_mixing_time(chain: ChainMatrix, eps, tol=1e-12, t_max=2 ** 40) -> int:
    """Smallest t with max_x TV(P^t(x, .), pi) <= eps.

    Worst-start distance is nonincreasing in t, so squaring finds a bracket
    and a descent over the stored powers pins the exact value.
    """
    if chain.size > CHAIN_GUARD:
        raise GuardExceeded("chain too large")
    if not chain.is_connected():
        raise UsageError("chain is not ergodic")
    pi = chain.pi
    ok = lambda M: _worst_tv(M, pi) <= eps + tol
    if ok(np.eye(chain.size)):
        return 0
    powers = [chain.P]
    while not ok(powers[-1]):
        if 2 ** len(powers) > t_max:
            raise GuardExceeded("mixing time exceeds t_max")
        powers.append(powers[-1] @ powers[-1])
    if len(powers) == 1:
        return 1
    cur = powers[-2]
    t = 2 ** (len(powers) - 2)
    for i in range(len(powers) - 3, -1, -1):
        cand = cur @ powers[i]
        if not ok(cand):
            cur = cand
            t += 2 ** i
    return t + 1


def tv_curve(chain: ChainMatrix, t_max) -> np.ndarray:
    out = [_worst_tv(np.eye(chain.size), chain.pi)]
    M = np.eye(chain.size)
    for _ in range(t_max):
        M = M @ chain.P
        out.append(_worst_tv(M, chain.pi))
    return np.array(out)


def conductance_of_cut(chain: ChainMatrix, A) -> float:
    A = sorted(set(int(a) for a in A))
    if not A:
        raise UsageError("cut side must be nonempty")
    mask = np.zeros(chain.size, dtype=bool)
    mask[A] = True
    vol = chain.pi[mask].sum()
    if vol > 0.5 + 1e-12:
        raise UsageError("cut side must carry at most half the stationary mass")
    Q = chain.pi[:, None] * chain.P
    return float(Q[np.ix_(mask, ~mask)].sum() / vol)


def rho(graph: Graph) -> float:
    d = graph.degrees
    if d.min() == 0:
        return math.inf
    return float(d.max() / d.min())


# -- laws and distances ----------------------------------------------------

def tv_distance(p, q) -> float:
    """Half-L1 distance; dicts are aligned on the union of their keys."""
    if isinstance(p, dict) or isinstance(q, dict):
        keys = set(p) | set(q)
        return 0.5 * sum(abs(p.get(x, 0.0) - q.get(x, 0.0)) for x in keys)
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    return 0.5 * float(np.abs(p - q).sum())


def empirical_law(samples) -> dict:
    rows = [tuple(r) for r in np.asarray(samples).tolist()]
    c = Counter(rows)
    N = len(rows)
    return {g: v / N for g, v in c.items()}


def counts_over(index: GraphletIndex, samples) -> np.ndarray:
    """Histogram of samples over index.all; raises on a non-graphlet sample."""
    counts = np.zeros(index.N_k, dtype=np.int64)
    pos = index.position
    for row in np.asarray(samples).tolist():
        key = tuple(sorted(row))
        if key not in pos:
            raise AssertionError(f"sample {key} is not a graphlet")
        counts[pos[key]] += 1
    return counts


def noise_allowance(support, N) -> float:
    return 3.0 * math.sqrt(support / (2.0 * N))


def exact_sampling_law(sampler, v, index: GraphletIndex | None = None) -> dict:
    """Exact law of the growing process at v, via prob() over its bucket."""
    idx = index or enumerate_graphlets(sampler.graph, sampler.k)
    bucket = idx.buckets(sampler.order.rank).get(v, [])
    return {g: sampler.prob(g) for g in bucket}


# -- T(g) consistency --------------------------------------------------------

def t_sum_matches(graph: Graph, k: int) -> tuple:
    """(sum over k-graphlets of |T(g)|, number of edges of the (k-1)-graphlet graph)."""
    from .walk import compute_T
    idx = enumerate_graphlets(graph, k)
    total = sum(compute_T(graph, g) for g in idx.all)
    if k - 1 == 1:
        edges = graph.m
    else:
        edges = build_Gk(graph, k - 1).n_edges
    return total, edges


# -- comparison harness ------------------------------------------------------

def ugs_compare(graph: Graph, order, C1=1.0):
    """Exact growing process and probabilities on an arbitrary (e.g. approximate) order.

    Acceptance is min(1, beta * k^(-C1 k) / (b_v p(S))), so accepted samples
    are uniform over the union of the buckets deemed nonempty whenever the
    clamp never binds.
    """
    from .ugs import UgsSampler
    beta = order.params.beta if order.params is not None else 1.0
    coef = beta * float(order.k) ** (-C1 * order.k)
    return UgsSampler(graph, order.k, order=order.with_sorted_view(graph), coef=coef)
