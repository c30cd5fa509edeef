"""Connectivity of random uniform hypergraphs."""

import json

from ._hyperconn import (
    F,
    G,
    BudgetExceeded,
    ConvergenceError,
    InsufficientData,
    NotApplicable,
    __version__,
    bcm_log_P,
    connected_count,
    exact_log_P,
    log_P_dense,
    log_P_universal,
    pi_k,
    solve_d,
    solve_dbar,
    tree_count,
)
from . import _hyperconn


def sample_batch(r, n, d, trials, seed=0, threads=0):
    return json.loads(_hyperconn.sample_batch_json(r, n, d, trials, seed, threads))


def llt_check(r, n, d, trials, seed=0, threads=0):
    return json.loads(_hyperconn.llt_check_json(r, n, d, trials, seed, threads))


def connectivity_check(r, s, m, trials, seed=0, threads=0):
    return json.loads(_hyperconn.connectivity_check_json(r, s, m, trials, seed, threads))


__all__ = [
    "F",
    "G",
    "BudgetExceeded",
    "ConvergenceError",
    "InsufficientData",
    "NotApplicable",
    "__version__",
    "bcm_log_P",
    "connected_count",
    "connectivity_check",
    "exact_log_P",
    "llt_check",
    "log_P_dense",
    "log_P_universal",
    "pi_k",
    "sample_batch",
    "solve_d",
    "solve_dbar",
    "tree_count",
]
