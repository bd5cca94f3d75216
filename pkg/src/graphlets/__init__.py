"""Uniform, approximately uniform and random-walk graphlet sampling."""
from .errors import (EmptyInstanceError, GraphletError, GuardExceeded, ParseError,
                     UnsupportedOperation, UsageError)
from .graph import (Graph, Graphlet, QueryLedger, gen_clique, gen_cycle, gen_erdos_renyi,
                    gen_fat_lollipop, gen_path, gen_star, load_edge_list)
from .order import DDOrder, check_ab_order, compute_apx_dd, compute_dd, deg_after
from .ugs import UgsSampler
from .apx import ApxUgsConfig, ApxUgsSampler
from .walk import RandomWalkSampler, WalkConfig
from .count import classify_iso, estimate_counts

__version__ = "0.1.0"

__all__ = [
    "EmptyInstanceError", "GraphletError", "GuardExceeded", "ParseError", "UnsupportedOperation",
    "UsageError", "Graph", "Graphlet", "QueryLedger", "gen_clique", "gen_cycle", "gen_erdos_renyi",
    "gen_fat_lollipop", "gen_path", "gen_star", "load_edge_list", "DDOrder", "check_ab_order",
    "compute_apx_dd", "compute_dd", "deg_after", "UgsSampler", "ApxUgsConfig", "ApxUgsSampler",
    "RandomWalkSampler", "WalkConfig", "classify_iso", "estimate_counts",
]
