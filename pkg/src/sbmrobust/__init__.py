"""Robustness trade-offs of stochastic block model ensembles.

Analytic percolation on block models with zero-truncated Poisson degrees,
a steady-state hypervolume-selection optimizer over block-model genomes,
entropy-based block reduction and a finite-size Monte-Carlo cross-check.
"""

from .blockmodel import (
    BlockModel,
    InvalidModelError,
    Violation,
    g0,
    g1,
    merge_blocks,
    mixing_matrix,
    modified_poisson_mean,
    modified_poisson_pmf,
    poisson_param_from_mean,
    read_model,
    validate,
    write_model,
)
from .entropy import ReductionReport, entropy_density, merge_gain, reduce
from .percolation import (
    ConvergenceError,
    PhiVector,
    RemovalSchedule,
    SCurve,
    giant_component,
    phi_for,
    robustness_pair,
    s_curve,
    solve_u,
)

__version__ = "0.1.0"

__all__ = [
    "BlockModel",
    "ConvergenceError",
    "InvalidModelError",
    "PhiVector",
    "ReductionReport",
    "RemovalSchedule",
    "SCurve",
    "Violation",
    "entropy_density",
    "g0",
    "g1",
    "giant_component",
    "merge_blocks",
    "merge_gain",
    "mixing_matrix",
    "modified_poisson_mean",
    "modified_poisson_pmf",
    "phi_for",
    "poisson_param_from_mean",
    "read_model",
    "reduce",
    "robustness_pair",
    "s_curve",
    "solve_u",
    "validate",
    "write_model",
]
