"""Multi-objective search for robust block models."""

from .genome import decode, genome_length
from .operators import polynomial_mutation, sbx_crossover
from .pareto import (
    dominates,
    hv_contribution,
    hv_contributions,
    hypervolume_2d,
    nondominated_mask,
    nondominated_ranks,
)
from .sms_emoa import (
    SMSEMOA,
    ConstrainedResult,
    Front,
    Individual,
    OptConfig,
    PercolationEvaluator,
    RunResult,
    Snapshot,
    constrained_run,
    sms_emoa_run,
)

__all__ = [
    "SMSEMOA",
    "ConstrainedResult",
    "Front",
    "Individual",
    "OptConfig",
    "PercolationEvaluator",
    "RunResult",
    "Snapshot",
    "constrained_run",
    "decode",
    "dominates",
    "genome_length",
    "hv_contribution",
    "hv_contributions",
    "hypervolume_2d",
    "nondominated_mask",
    "nondominated_ranks",
    "polynomial_mutation",
    "sbx_crossover",
    "sms_emoa_run",
]
