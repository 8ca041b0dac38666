"""Optimal M-type approximation of discrete probability distributions."""

from .costs import CostInstance, cost_from_delta_sum, delta, evaluate, prealloc, quantize
from .errors import *  # noqa: F401,F403
from .greedy import AllocationResult, DeltaSource, greedy_allocate, selection_trace
from .markov import (
    MarkovModel,
    QuantizedMarkov,
    divergence_rate,
    graph_preserved,
    quantize_markov,
    stationary_distribution,
)
from .oracle import OracleResult, agreement_suite, brute_force
from .projection import (
    BoundReport,
    ProjectionResult,
    bound_eq7,
    bound_eq12,
    bound_sweep,
    log_nu_check,
    pythagorean_check,
    reverse_i_projection,
    reverse_pinsker_check,
)
from .types import CostKind, MTypeApprox, TargetDistribution, entropy, validate_target

__version__ = "0.1.0"
