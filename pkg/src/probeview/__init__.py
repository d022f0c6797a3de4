"""Reduced density matrices of bosonic Fock states restricted to a spatial region.

Restricting a single-mode state to the part of its mode inside a region
(overlap amplitude q0) and tracing out the rest is a pure-loss channel
of transmissivity q0**2.  This package provides the general series for
the reduced matrix elements, closed forms for number, coherent, and
thermal inputs, an independent brute-force two-mode verifier, and sweep
helpers plus a CLI that emit the derived curves as CSV/JSON.
"""

from .analysis import ConsistencyError, SweepResult, cat_purity, purity, purity_sweep, thermal_sweep
from .fock import (
    Coherent,
    Custom,
    DensityMatrix,
    FockVector,
    Materialized,
    Mixture,
    ModeSplit,
    Number,
    StateFamily,
    Thermal,
    TruncationError,
    TruncationPolicy,
    ValidationError,
    VacuumLimitError,
    Violation,
    materialize,
    number_expectation,
    overlap_from_profile,
    validate_density_matrix,
)
from .oracle import (
    CompareResult,
    LadderOperatorMatrix,
    TwoModeVector,
    annihilation_matrix,
    build_split_creation,
    compare_states,
    creation_matrix,
    expand_two_mode,
    partial_trace_numeric,
    random_fock_vectors,
)
from .reduction import (
    BetaPrime,
    ReductionReport,
    beta_prime,
    binomial_pmf,
    reduce_coherent,
    reduce_mixed,
    reduce_number_state,
    reduce_pure_general,
    reduce_thermal,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ModeSplit",
    "FockVector",
    "DensityMatrix",
    "Number",
    "Coherent",
    "Thermal",
    "Custom",
    "Mixture",
    "StateFamily",
    "TruncationPolicy",
    "Materialized",
    "Violation",
    "ValidationError",
    "TruncationError",
    "VacuumLimitError",
    "ConsistencyError",
    "materialize",
    "validate_density_matrix",
    "number_expectation",
    "overlap_from_profile",
    "ReductionReport",
    "BetaPrime",
    "binomial_pmf",
    "reduce_number_state",
    "reduce_pure_general",
    "reduce_mixed",
    "reduce_coherent",
    "beta_prime",
    "reduce_thermal",
    "LadderOperatorMatrix",
    "TwoModeVector",
    "CompareResult",
    "creation_matrix",
    "annihilation_matrix",
    "build_split_creation",
    "expand_two_mode",
    "partial_trace_numeric",
    "compare_states",
    "random_fock_vectors",
    "SweepResult",
    "purity",
    "purity_sweep",
    "thermal_sweep",
    "cat_purity",
]
