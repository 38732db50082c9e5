"""Approximate utilitarian aggregation of finite-prize vN-M utility profiles.

The package measures how far a decision maker's utility ``v0`` is from
respecting the individuals' unanimous preferences (the epsilon-Pareto gaps),
computes the weights that bring ``v0`` closest to a utilitarian sum, and
checks that the two numbers coincide. A separate layer pools subjective
expected utility tastes and beliefs on finite state spaces.
"""

__version__ = "0.1.0"

from .aggregation import (DualityMismatch, DualityReport, MarginResult, ResidualFunction,
                          center, duality_certificate, min_oscillation,
                          positive_weight_margin)
from .audit import (AxiomVerdict, ViolationCertificate, check_indifference,
                    check_semistrong, check_sequential_strong, check_strong,
                    indifference_gap, semistrong_gap, strict_gain)
from .core import (AggregationResult, DimensionError, Lottery, ParetoAggError, PrizeSpace,
                   Problem, SolverError, UtilityVector, Weights, evaluate, oscillation)
from .lp import LinearProgram, LpSolution, SolverOptions, SolveStats, solve, solve_exact
from .oracle import (GridSpec, GridTooLarge, brute_gap, brute_min_oscillation,
                     exact_recheck, sandwich)
from .seu import (Belief, EnumerationCapExceeded, SeuProblem, SignedResidual,
                  belief_pool, event_tv, likelihood_floor_check, taste_decompose)

__all__ = [
    "AggregationResult", "AxiomVerdict", "Belief", "DimensionError", "DualityMismatch",
    "DualityReport", "EnumerationCapExceeded", "GridSpec", "GridTooLarge", "LinearProgram",
    "Lottery", "LpSolution", "MarginResult", "ParetoAggError", "PrizeSpace", "Problem",
    "ResidualFunction", "SeuProblem", "SignedResidual", "SolveStats", "SolverError",
    "SolverOptions", "UtilityVector", "ViolationCertificate", "Weights", "belief_pool",
    "brute_gap", "brute_min_oscillation", "center", "check_indifference",
    "check_semistrong", "check_sequential_strong", "check_strong", "duality_certificate",
    "evaluate", "event_tv", "exact_recheck", "indifference_gap", "likelihood_floor_check",
    "min_oscillation", "oscillation", "positive_weight_margin", "sandwich", "semistrong_gap",
    "solve", "solve_exact", "strict_gain", "taste_decompose", "__version__",
]
