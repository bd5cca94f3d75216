"""Degree-dominating vertex orders: exact peeling and the sublinear approximation."""
from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EmptyInstanceError, UnsupportedOperation, UsageError
from .graph import Graph
from .rand import AliasTable

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ApxDDParams:
    beta: float
    k: int
    h_const: float = 8.0
    h: int | None = None  # overrides the formula when set
    exhaustive: bool = True  # read the whole list when h >= d_v

    @property
    def eta(self):
        return self.beta ** (1.0 / (self.k - 1)) / (6 * self.k ** 2)

    @property
    def alpha(self):
        return self.eta / self.k

    def samples(self, n):
        if self.h is not None:
            return int(self.h)
        return math.ceil(self.h_const * self.eta ** -2 * math.log(n + 1))

    def to_dict(self):
        return {"beta": self.beta, "k": self.k, "h_const": self.h_const,
                "h": self.h, "exhaustive": self.exhaustive}


@dataclass(eq=False)
class DDOrder:
    """A vertex order with bucket estimates.

    ``b_base[v]`` holds the integer d with b_v = d^(k-1) (0 when b_v = 0), so
    Z is exact.  Exact orders also carry ``adj_rank``: each adjacency list
    re-sorted by rank and stored as ranks, in the CSR layout of the graph.
    """

    k: int
    mode: str
    rank: np.ndarray
    b_base: np.ndarray
    seed: int | None = None
    params: ApxDDParams | None = None
    s: np.ndarray | None = None
    adj_rank: np.ndarray | None = None
    deg_after: np.ndarray | None = None
    _alias: AliasTable | None = field(default=None, repr=False)

    def __post_init__(self):
        self.rank = np.asarray(self.rank, dtype=np.int32)
        self.b_base = np.asarray(self.b_base, dtype=np.int64)
        self.order = np.argsort(self.rank).astype(np.int32)
        self.b = np.where(self.b_base > 0, self.b_base.astype(np.float64) ** (self.k - 1), 0.0)
        self.Z = sum(int(d) ** (self.k - 1) for d in self.b_base.tolist() if d > 0)

    @property
    def n(self):
        return self.rank.shape[0]

    @property
    def beta_k(self) -> Fraction:
        if self.Z == 0:
            raise EmptyInstanceError("no k-graphlet: Z = 0")
        return Fraction(1, math.factorial(self.k) * self.Z)

    def p(self, v) -> float:
        return self.b[v] / self.Z if self.Z else 0.0

    def precedes(self, u, v) -> bool:
        return bool(self.rank[u] < self.rank[v])

    @property
    def bucket_sampler(self) -> AliasTable:
        if self.Z == 0:
            raise EmptyInstanceError("no k-graphlet: Z = 0")
        if self._alias is None:
            sup = np.flatnonzero(self.b_base > 0)
            self._alias = AliasTable(sup, self.b[sup])
        return self._alias

    @property
    def has_sorted_view(self):
        return self.adj_rank is not None

    def with_sorted_view(self, graph: Graph) -> "DDOrder":
        """Copy carrying the rank-sorted adjacency (any mode, used by test harnesses)."""
        adj_rank, deg_after = _sorted_view(graph, self.rank)
        return DDOrder(self.k, self.mode, self.rank, self.b_base, self.seed, self.params,
                       self.s, adj_rank, deg_after)

    # -- serialization ---------------------------------------------------

    def to_dict(self, graph: Graph | None = None):
        d = {
            "version": FORMAT_VERSION,
            "mode": self.mode,
            "k": self.k,
            "seed": self.seed,
            "n": self.n,
            "rank": self.rank.tolist(),
            "b_base": self.b_base.tolist(),
            "Z": str(self.Z),
        }
        if self.params is not None:
            d["params"] = self.params.to_dict()
        if self.s is not None:
            d["s"] = self.s.tolist()
        if graph is not None:
            d["graph"] = graph.fingerprint()
        return d

    def save(self, path, graph: Graph | None = None):
        with open(path, "w") as fh:
            json.dump(self.to_dict(graph), fh)

    @classmethod
    def load(cls, path, graph: Graph | None = None) -> "DDOrder":
        with open(path) as fh:
            d = json.load(fh)
        if d.get("version") != FORMAT_VERSION:
            raise UsageError(f"order cache version {d.get('version')} unsupported")
        if graph is not None:
            if d["n"] != graph.n or d.get("graph", graph.fingerprint()) != graph.fingerprint():
                raise UsageError("order cache was built for a different graph")
        params = ApxDDParams(**d["params"]) if "params" in d else None
        s = np.array(d["s"]) if "s" in d else None
        o = cls(d["k"], d["mode"], d["rank"], d["b_base"], d["seed"], params, s)
        if int(d["Z"]) != o.Z:
            raise UsageError("order cache is corrupt: Z mismatch")
        if o.mode == "exact" and graph is not None:
            o = o.with_sorted_view(graph)
        return o


def _sorted_view(graph: Graph, rank):
    n = graph.n
    src = np.repeat(np.arange(n, dtype=np.int64), graph.degrees)
    nbr_rank = rank[graph.indices].astype(np.int64)
    perm = np.argsort(src * n + nbr_rank, kind="stable")
    adj_rank = nbr_rank[perm].astype(np.int32)
    before = nbr_rank < rank[src]
    deg_after = graph.degrees - np.bincount(src[before], minlength=n)
    adj_rank.flags.writeable = False
    return adj_rank, deg_after.astype(np.int64)


def deg_after(order: DDOrder, graph: Graph, u, v) -> int:
    """d(u | G(v)) for u at or after v, by binary search in the sorted view."""
    if not order.has_sorted_view:
        raise UnsupportedOperation("deg_after needs the rank-sorted adjacency (exact order)")
    if order.rank[u] < order.rank[v]:
        raise UsageError(f"deg_after requires u={u} not before v={v}")
    lo, hi = graph.indptr[u], graph.indptr[u + 1]
    j = np.searchsorted(order.adj_rank[lo:hi], order.rank[v])
    return int(graph.degrees[u] - j)


def _peel(graph: Graph):
    """Rank by repeated removal of a max-degree vertex, smallest id first on ties."""
    n = graph.n
    cur = graph.degrees.tolist()
    adj = graph.adj_lists()
    heap = [(-cur[v], v) for v in range(n)]
    heapq.heapify(heap)
    removed = [False] * n
    rank = np.empty(n, dtype=np.int32)
    pos = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or -d != cur[v]:
            continue
        removed[v] = True
        rank[v] = pos
        pos += 1
        for w in adj[v]:
            if not removed[w]:
                cur[w] -= 1
                heapq.heappush(heap, (-cur[w], w))
    return rank


def _bucket_nonempty_sorted(v, k, indptr, adj_rank, order, rank):
    """Truncated BFS in G(v) over the rank-sorted lists.

    Each list is scanned from its last entry down and abandoned at the first
    neighbor before v.  Returns (nonempty, neighbor entries examined).
    """
    rv = rank[v]
    pushed = {v}
    queue = deque([v])
    looked = 0
    while queue:
        u = queue.popleft()
        for j in range(indptr[u + 1] - 1, indptr[u] - 1, -1):
            looked += 1
            r = adj_rank[j]
            if r < rv:
                break
            z = order[r]
            if z not in pushed:
                pushed.add(z)
                if len(pushed) >= k:
                    return True, looked
                queue.append(z)
    return len(pushed) >= k, looked


def compute_dd(graph: Graph, k: int) -> DDOrder:
    """Exact 1-DD order with b_v = d(v|G(v))^(k-1) on nonempty buckets."""
    if k < 2:
        raise UsageError("k >= 2 required")
    rank = _peel(graph)
    adj_rank, dafter = _sorted_view(graph, rank)
    graph.ledger.add(neighbor=2 * graph.m, degree=graph.n)
    order = np.argsort(rank).astype(np.int32).tolist()
    rk = rank.tolist()
    indptr = graph.indptr.tolist()
    ar = adj_rank.tolist()
    da = dafter.tolist()
    b_base = np.zeros(graph.n, dtype=np.int64)
    looked_total = 0
    for v in range(graph.n):
        if da[v] == 0:
            continue
        ok, looked = _bucket_nonempty_sorted(v, k, indptr, ar, order, rk)
        looked_total += looked
        if ok:
            b_base[v] = da[v]
    graph.ledger.add(neighbor=looked_total)
    return DDOrder(k, "exact", rank, b_base, adj_rank=adj_rank, deg_after=dafter)


def _succ_mask(nbrs, v, s):
    """x after v under the s-order: s_x < s_v, or equal and x < v."""
    sv = s[v]
    sx = s[nbrs]
    return (sx < sv) | ((sx == sv) & (nbrs < v))


def _bucket_nonempty_pred(v, k, graph, s):
    """Truncated BFS in G(v) where membership is the s-predicate; all neighbors examined."""
    adj = graph.adj_lists()
    sv = s[v]
    pushed = {v}
    queue = deque([v])
    looked = 0
    while queue:
        u = queue.popleft()
        for z in adj[u]:
            looked += 1
            if z in pushed:
                continue
            sz = s[z]
            if sz < sv or (sz == sv and z < v):
                pushed.add(z)
                if len(pushed) >= k:
                    return True, looked
                queue.append(z)
    return len(pushed) >= k, looked


def compute_apx_dd(graph: Graph, k: int, beta: float, seed=None, *, h_const=8.0,
                   h=None, exhaustive=True) -> DDOrder:
    """Approximate (alpha, beta)-DD order from sampled neighbor positions.

    Order predicate: u before v iff s_u > s_v, or s_u = s_v and u > v.  The
    order is only evaluated through s until the very end.  With
    ``exhaustive`` a vertex whose whole list is no longer than h is read in
    full instead of sampled h times (the decision then uses the exact
    fraction of successors).
    """
    if k < 2:
        raise UsageError("k >= 2 required")
    if not 0 < beta < 1:
        raise UsageError("0 < beta < 1 required")
    params = ApxDDParams(beta, k, h_const, h, exhaustive)
    eta = params.eta
    H = params.samples(graph.n)
    rng = np.random.default_rng(seed)
    n = graph.n
    deg = graph.degrees
    s = deg.astype(np.float64)
    b_base = np.zeros(n, dtype=np.int64)
    ids = np.arange(n)
    nq = 0
    for v in np.lexsort((-ids, -deg)).tolist():
        d = int(deg[v])
        if d == 0:
            continue  # no neighbor to sample: b_v = 0, s_v = 3*eta*0 = 0
        nbrs = graph.adj(v)
        if exhaustive and H >= d:
            nq += d
            ok = int(_succ_mask(nbrs, v, s).sum()) >= 2 * eta * d
        else:
            nq += H
            pick = nbrs[rng.integers(0, d, size=H)]
            ok = int(_succ_mask(pick, v, s).sum()) >= 2 * eta * H
        if ok:
            b_base[v] = d
        else:
            s[v] = 3 * eta * d
    graph.ledger.add(neighbor=nq, degree=n)
    nq = 0
    limit = k / eta
    for v in range(n):
        d = int(deg[v])
        if d > limit:
            continue
        b_base[v] = 0
        if d == 0:
            continue
        nq += d
        da = int(_succ_mask(graph.adj(v), v, s).sum())
        if da == 0:
            continue
        ok, looked = _bucket_nonempty_pred(v, k, graph, s)
        nq += looked
        if ok:
            b_base[v] = da
    graph.ledger.add(neighbor=nq)
    rank = np.empty(n, dtype=np.int32)
    rank[np.lexsort((-ids, -s))] = np.arange(n, dtype=np.int32)
    return DDOrder(k, "apx", rank, b_base, seed=seed, params=params, s=s)


# -- audit ---------------------------------------------------------------

@dataclass
class ABReport:
    passed: dict
    witnesses: dict
    mass_kept: float
    ratios: list

    @property
    def ok(self):
        return all(self.passed[i] for i in (1, 2, 3, 4))


def check_ab_order(graph: Graph, k: int, order: DDOrder, alpha, beta, C=1.0,
                   bucket_sizes=None) -> ABReport:
    """Audit the four (alpha, beta)-DD properties against exact bucket sizes.

    ``bucket_sizes`` maps v -> |B(v)| under this order; computed by the
    enumeration oracle when omitted.
    """
    if bucket_sizes is None:
        from .oracle import enumerate_graphlets
        idx = enumerate_graphlets(graph, k)
        bucket_sizes = idx.bucket_sizes(order.rank)
    B = np.asarray(bucket_sizes, dtype=np.float64)
    n = graph.n
    rank = order.rank
    deg = graph.degrees.astype(np.float64)
    b = order.b
    passed, wit = {}, {}

    total = B.sum()
    kept = B[b > 0].sum()
    passed[1] = bool(kept >= (1 - beta) * total)
    wit[1] = None if passed[1] else {"kept": kept, "total": total}

    lo_c, hi_c = k ** (-C * k) * beta, k ** (C * k) / beta
    ratios, bad2 = [], []
    for v in np.flatnonzero(b > 0).tolist():
        r = b[v] / B[v] if B[v] > 0 else math.inf
        ratios.append(r)
        if not lo_c <= r <= hi_c:
            bad2.append({"v": v, "b": b[v], "B": B[v]})
    passed[2] = not bad2
    wit[2] = bad2[0] if bad2 else None

    # property 3: d(v|G(v)) >= alpha d_v >= alpha d(u|G(v)) for u after v.
    # "3dd" is the weaker alpha-DD condition d(v|G(v)) >= alpha d(u|G(v)).
    e = graph.edges()
    bad3 = bad_dd = None
    for v in sorted(np.flatnonzero(b > 0).tolist(), key=lambda x: rank[x]):
        inside = rank >= rank[v]
        keep = inside[e[:, 0]] & inside[e[:, 1]]
        dv = np.bincount(e[keep].ravel(), minlength=n)
        later = inside.copy()
        later[v] = False
        top = int(np.flatnonzero(later)[np.argmax(dv[later])]) if later.any() else None
        top_d = dv[top] if top is not None else 0
        if bad3 is None:
            if dv[v] < alpha * deg[v] - 1e-12:
                bad3 = {"v": v, "d_after": int(dv[v]), "d_v": int(deg[v])}
            elif deg[v] < top_d:
                bad3 = {"v": v, "u": top, "d_v": int(deg[v]), "d_u_after": int(top_d)}
        if bad_dd is None and dv[v] < alpha * top_d - 1e-12:
            bad_dd = {"v": v, "u": top, "d_after": int(dv[v]), "d_u_after": int(top_d)}
    passed[3] = bad3 is None
    wit[3] = bad3
    passed["3dd"] = bad_dd is None
    wit["3dd"] = bad_dd

    order_vs = order.order
    dseq = deg[order_vs]
    suffix = np.maximum.accumulate(dseq[::-1])[::-1]
    bad4 = None
    for i in range(n - 1):
        if dseq[i] < 3 * k * alpha * suffix[i + 1] - 1e-12:
            u = int(order_vs[i + 1 + int(np.argmax(dseq[i + 1:]))])
            bad4 = {"v": int(order_vs[i]), "u": u, "d_v": int(dseq[i]), "d_u": int(deg[u])}
            break
    passed[4] = bad4 is None
    wit[4] = bad4
    return ABReport(passed, wit, float(kept / total) if total else 1.0, ratios)
