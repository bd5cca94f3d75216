"""Flat array bundles handed to the sampling kernels."""
from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np


class _Ctx:
    def lists(self):
        """Plain-list copies for the pure-Python kernels (cached)."""
        cache = self.__dict__.get("_lists")
        if cache is None:
            d = {}
            for name, val in vars(self).items():
                if name.startswith("_"):
                    continue
                d[name] = val.tolist() if isinstance(val, np.ndarray) else val
            cache = SimpleNamespace(**d)
            self.__dict__["_lists"] = cache
        return cache


@dataclass(eq=False)
class UgsCtx(_Ctx):
    k: int
    indptr: np.ndarray  # int64
    adj: np.ndarray  # int32, id-sorted rows
    deg: np.ndarray  # int64
    adj_rank: np.ndarray  # int32, rank-sorted rows, holds ranks
    order: np.ndarray  # int32, vertex at each rank
    rank: np.ndarray  # int32
    deg_after: np.ndarray  # int64
    b: np.ndarray  # float64
    a_sup: np.ndarray  # int32
    a_prob: np.ndarray  # float64
    a_alias: np.ndarray  # int32
    coef: float


@dataclass(eq=False)
class ApxCtx(_Ctx):
    k: int
    indptr: np.ndarray
    adj: np.ndarray
    deg: np.ndarray
    s: np.ndarray  # float64 order keys
    b: np.ndarray
    a_sup: np.ndarray
    a_prob: np.ndarray
    a_alias: np.ndarray
    coef: float
    ell_grow: float
    h_grow: float
    ell_prob: float
    h_prob: float
    trial_cap: int
    exhaustive: bool


@dataclass(eq=False)
class WalkCtx(_Ctx):
    k: int  # size of the sampled graphlets; the walk lives on (k-1)-graphlets
    indptr: np.ndarray
    adj: np.ndarray
    deg: np.ndarray
    t_mix: int


def alias_arrays(table):
    return (np.ascontiguousarray(table.support, dtype=np.int32),
            np.ascontiguousarray(table.prob, dtype=np.float64),
            np.ascontiguousarray(table.alias, dtype=np.int32))
