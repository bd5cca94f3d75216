"""Random streams and the alias table.

All kernels draw only uniform doubles from a numpy ``Generator`` and derive
integers as ``int(u * n)``.  Python code reads the doubles in blocks through
``Uniforms``; compiled code reads them one at a time from the same bit
generator.  Both see the same sequence, so seeded output does not depend on
the backend.
"""
from __future__ import annotations

import numpy as np

BLOCK = 256  # samples per independent stream


def stream(seed, *key) -> np.random.Generator:
    """Independent generator for (seed, key); key is a tuple of ints."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(x) for x in key))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class Uniforms:
    """Buffered view of a generator's next_double sequence."""

    __slots__ = ("gen", "buf", "pos", "chunk")

    def __init__(self, gen, chunk=4096):
        self.gen = gen
        self.chunk = chunk
        self.buf = []
        self.pos = 0

    def __call__(self) -> float:
        if self.pos == len(self.buf):
            self.buf = self.gen.random(self.chunk).tolist()
            self.pos = 0
        u = self.buf[self.pos]
        self.pos += 1
        return u


def draw_index(u, n):
    j = int(u * n)
    return j if j < n else n - 1


class AliasTable:
    """Vose's alias method over ``support`` with nonnegative ``weights``."""

    def __init__(self, support, weights):
        support = np.asarray(support, dtype=np.int32)
        w = np.asarray(weights, dtype=np.float64)
        if support.shape != w.shape:
            raise ValueError("support and weights differ in length")
        if w.size == 0 or not np.all(w >= 0) or w.sum() <= 0:
            raise ValueError("need at least one positive weight")
        K = w.size
        scaled = w * (K / w.sum())
        prob = np.ones(K, dtype=np.float64)
        alias = np.arange(K, dtype=np.int32)
        small = [i for i in range(K) if scaled[i] < 1.0]
        large = [i for i in range(K) if scaled[i] >= 1.0]
        sc = scaled.tolist()
        while small and large:
            s = small.pop()
            l = large.pop()
            prob[s] = sc[s]
            alias[s] = l
            sc[l] = (sc[l] + sc[s]) - 1.0
            (small if sc[l] < 1.0 else large).append(l)
        # leftovers are 1 up to rounding
        self.support = support
        self.prob = prob
        self.alias = alias
        self.weights = w

    def __len__(self):
        return self.support.shape[0]

    def draw(self, uni) -> int:
        """Two uniforms: a slot, then the coin."""
        i = draw_index(uni(), len(self))
        if uni() >= self.prob[i]:
            i = self.alias[i]
        return int(self.support[i])

    def probabilities(self) -> np.ndarray:
        """Exact per-slot law implied by the table (for tests)."""
        K = len(self)
        p = self.prob / K
        q = np.zeros(K)
        np.add.at(q, self.alias, (1.0 - self.prob) / K)
        return p + q
