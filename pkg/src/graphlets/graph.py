"""Immutable CSR graph with unit-cost query accounting, loaders and generators."""
from __future__ import annotations

import hashlib
import io
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, UsageError


@dataclass
class QueryLedger:
    """Counts of neighbor / pair / degree queries.

    Counters only grow; ``reset`` is the single way to zero them.  Updates are
    guarded by a lock so one ledger can be shared by worker threads.
    """

    neighbor_queries: int = 0
    pair_queries: int = 0
    degree_queries: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add(self, neighbor=0, pair=0, degree=0):
        with self._lock:
            self.neighbor_queries += int(neighbor)
            self.pair_queries += int(pair)
            self.degree_queries += int(degree)

    def merge(self, other: "QueryLedger"):
        self.add(other.neighbor_queries, other.pair_queries, other.degree_queries)

    def reset(self):
        with self._lock:
            self.neighbor_queries = self.pair_queries = self.degree_queries = 0

    @property
    def total(self) -> int:
        return self.neighbor_queries + self.pair_queries + self.degree_queries

    def snapshot(self) -> dict:
        return {
            "neighbor_queries": self.neighbor_queries,
            "pair_queries": self.pair_queries,
            "degree_queries": self.degree_queries,
            "total": self.total,
        }


class Graph:
    """Simple undirected graph on vertices 0..n-1 in CSR form.

    ``indices[indptr[v]:indptr[v+1]]`` is the strictly increasing neighbor
    list of v.  The arrays are read-only; the only mutable part is ``ledger``.
    """

    def __init__(self, n, indptr, indices, *, validate=True):
        self.n = int(n)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int32)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self.degrees = np.diff(self.indptr)
        self.degrees.flags.writeable = False
        self.m = int(self.indices.shape[0] // 2)
        self.ledger = QueryLedger()
        self._adj_lists = None
        if validate:
            self._validate()

    @classmethod
    def from_edges(cls, n, edges, *, allow_duplicates=False):
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise UsageError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise UsageError("self-loop")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        key = np.unique(lo * n + hi)
        if key.size != e.shape[0] and not allow_duplicates:
            raise UsageError("duplicate edge")
        lo, hi = key // n, key % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst, validate=False)

    def _validate(self):
        if self.indptr.shape != (self.n + 1,) or self.indptr[0] != 0:
            raise UsageError("malformed indptr")
        if self.indptr[-1] != self.indices.shape[0] or self.indices.shape[0] % 2:
            raise UsageError("malformed indices")
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= self.n):
            raise UsageError("neighbor id out of range")
        src = np.repeat(np.arange(self.n), self.degrees)
        if np.any(src == self.indices):
            raise UsageError("self-loop")
        same_row = src[1:] == src[:-1]
        if np.any(same_row & (self.indices[1:] <= self.indices[:-1])):
            raise UsageError("adjacency not strictly increasing")
        fwd = np.sort(src.astype(np.int64) * self.n + self.indices)
        bwd = np.sort(self.indices.astype(np.int64) * self.n + src)
        if not np.array_equal(fwd, bwd):
            raise UsageError("adjacency not symmetric")

    # -- access model ---------------------------------------------------

    def _check(self, v):
        if not 0 <= v < self.n:
            raise UsageError(f"vertex {v} out of range [0, {self.n})")

    def neighbor(self, v, i):
        """The i-th (1-based) smallest neighbor of v, or None if d_v < i."""
        self._check(v)
        self.ledger.add(neighbor=1)
        if i < 1 or i > self.degrees[v]:
            return None
        return int(self.indices[self.indptr[v] + i - 1])

    def pair(self, u, v):
        self._check(u)
        self._check(v)
        self.ledger.add(pair=1)
        return self.has_edge(u, v)

    def degree(self, v):
        self._check(v)
        self.ledger.add(degree=1)
        return int(self.degrees[v])

    # -- unbilled helpers ----------------------------------------------

    def adj(self, v) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adj_lists(self):
        if self._adj_lists is None:
            flat = self.indices.tolist()
            ptr = self.indptr.tolist()
            self._adj_lists = [flat[ptr[v]:ptr[v + 1]] for v in range(self.n)]
        return self._adj_lists

    def has_edge(self, u, v):
        if u == v:
            return False
        if self.degrees[u] > self.degrees[v]:
            u, v = v, u
        a = self.adj(u)
        j = np.searchsorted(a, v)
        return bool(j < a.shape[0] and a[j] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = src < self.indices
        return np.stack([src[mask], self.indices[mask].astype(np.int64)], axis=1)

    def induced_connected(self, vertices) -> bool:
        vs = list(vertices)
        if not vs:
            return False
        members = set(vs)
        seen = {vs[0]}
        stack = [vs[0]]
        adj = self.adj_lists()
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in members and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(members)

    def components(self) -> np.ndarray:
        label = np.full(self.n, -1, dtype=np.int64)
        adj = self.adj_lists()
        c = 0
        for s in range(self.n):
            if label[s] >= 0:
                continue
            label[s] = c
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if label[w] < 0:
                        label[w] = c
                        stack.append(w)
            c += 1
        return label

    def is_connected(self) -> bool:
        return self.n > 0 and int(self.components().max()) == 0

    def relabel(self, perm) -> "Graph":
        """Graph with vertex v renamed to perm[v]."""
        perm = np.asarray(perm, dtype=np.int64)
        return Graph.from_edges(self.n, perm[self.edges()])

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        h.update(self.indices.tobytes())
        return h.hexdigest()[:16]

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges().tolist())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Graphlet:
    vertices: tuple

    def __post_init__(self):
        vs = tuple(int(v) for v in self.vertices)
        if any(b <= a for a, b in zip(vs, vs[1:])):
            vs = tuple(sorted(vs))
        object.__setattr__(self, "vertices", vs)

    @property
    def k(self):
        return len(self.vertices)

    @classmethod
    def of(cls, graph: Graph, vertices) -> "Graphlet":
        g = cls(tuple(vertices))
        if len(set(g.vertices)) != g.k or g.k < 1:
            raise UsageError("graphlet vertices must be distinct")
        if not graph.induced_connected(g.vertices):
            raise UsageError(f"{g.vertices} does not induce a connected subgraph")
        return g

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)


# -- loading -------------------------------------------------------------

def load_edge_list(src, n=None, *, allow_duplicates=False) -> Graph:
    """Parse a whitespace edge list.

    ``src`` may be str, bytes, a path-like opened by the caller, or a file
    object.  ``n`` defaults to 1 + the largest id seen.
    """
    if isinstance(src, bytes):
        src = src.decode()
    if isinstance(src, str):
        src = io.StringIO(src)
    edges = []
    seen = {}
    for lineno, raw in enumerate(src, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode()
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ParseError(lineno, f"expected two vertex ids, got {len(tok)} tokens")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer token in {line!r}") from None
        if u < 0 or v < 0:
            raise ParseError(lineno, "negative vertex id")
        if n is not None and max(u, v) >= n:
            raise ParseError(lineno, f"vertex id {max(u, v)} >= declared n={n}")
        if u == v:
            raise ParseError(lineno, f"self-loop on vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            if not allow_duplicates:
                raise ParseError(lineno, f"duplicate edge {key} (first on line {seen[key]})")
            continue
        seen[key] = lineno
        edges.append(key)
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph.from_edges(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


# -- generators ----------------------------------------------------------

def gen_path(n) -> Graph:
    if n < 1:
        raise UsageError("n >= 1 required")
    e = np.stack([np.arange(n - 1), np.arange(1, n)], axis=1)
    return Graph.from_edges(n, e)


def gen_star(leaves) -> Graph:
    """K_{1,leaves} with center 0."""
    if leaves < 0:
        raise UsageError("leaves >= 0 required")
    e = np.stack([np.zeros(leaves, dtype=np.int64), np.arange(1, leaves + 1)], axis=1)
    return Graph.from_edges(leaves + 1, e)


def gen_clique(n) -> Graph:
    if n < 1:
        raise UsageError("n >= 1 required")
    iu = np.triu_indices(n, 1)
    return Graph.from_edges(n, np.stack(iu, axis=1))


def gen_cycle(n) -> Graph:
    if n < 3:
        raise UsageError("cycle needs n >= 3")
    e = np.stack([np.arange(n), (np.arange(n) + 1) % n], axis=1)
    return Graph.from_edges(n, e)


def gen_empty(n) -> Graph:
    return Graph.from_edges(n, np.zeros((0, 2), dtype=np.int64))


def gen_erdos_renyi(n, p, seed) -> Graph:
    if n < 1 or not 0.0 <= p <= 1.0:
        raise UsageError("need n >= 1 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.shape[0]) < p
    return Graph.from_edges(n, np.stack([iu[keep], ju[keep]], axis=1))


def gen_fat_lollipop(clique_order, path_width, k) -> Graph:
    """Two Δ-cliques joined by a fat path of 2(k-1) layers, each a δ-clique.

    Consecutive layers are joined by a perfect matching (the Cartesian
    product of a path with K_δ) and each end clique is completely joined to
    the adjacent end layer.
    """
    D, d = int(clique_order), int(path_width)
    if D < 1 or d < 1 or k < 3:
        raise UsageError("need clique_order >= 1, path_width >= 1, k >= 3")
    layers = 2 * (k - 1)
    n = 2 * D + layers * d
    left = list(range(D))
    right = list(range(D, 2 * D))
    layer = [list(range(2 * D + i * d, 2 * D + (i + 1) * d)) for i in range(layers)]
    edges = []

    def clique(vs):
        edges.extend((a, b) for i, a in enumerate(vs) for b in vs[i + 1:])

    clique(left)
    clique(right)
    for L in layer:
        clique(L)
    for i in range(layers - 1):
        edges.extend(zip(layer[i], layer[i + 1]))
    edges.extend((a, b) for a in left for b in layer[0])
    edges.extend((a, b) for a in right for b in layer[-1])
    return Graph.from_edges(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


GENERATORS = {
    "path": (gen_path, (int,)),
    "star": (gen_star, (int,)),
    "clique": (gen_clique, (int,)),
    "cycle": (gen_cycle, (int,)),
    "empty": (gen_empty, (int,)),
    "er": (gen_erdos_renyi, (int, float, int)),
    "lollipop": (gen_fat_lollipop, (int, int, int)),
}


def from_spec(spec: str) -> Graph:
    """Build a generator graph from ``name:arg,arg,...`` (e.g. ``er:25,0.25,7``)."""
    name, _, args = spec.partition(":")
    if name not in GENERATORS:
        raise UsageError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}")
    fn, types = GENERATORS[name]
    parts = [a for a in args.split(",") if a] if args else []
    if len(parts) != len(types):
        raise UsageError(f"generator {name} takes {len(types)} argument(s)")
    try:
        vals = [t(a) for t, a in zip(types, parts)]
    except ValueError as exc:
        raise UsageError(f"bad generator argument: {exc}") from None
    return fn(*vals)
