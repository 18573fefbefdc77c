"""Sparse linear array synthesis by l1 recovery, plus compressive-sensing diagnostics."""

from .array_model import (
    AngleGrid,
    ArrayModelError,
    ElementPlacement,
    Pattern,
    SymmetricArray,
    array_factor_full,
    array_factor_symmetric,
    to_db,
)
from .cs_synthesis import (
    Dictionary,
    PositionGrid,
    SolverConfig,
    SparseSolution,
    SynthesisError,
    SynthesisReport,
    build_dictionary,
    extract_sparse_array,
    sample_target,
    solve_l1,
    solve_l2_baseline,
    synthesize,
)
from .cs_theory import RipReport, mutual_coherence, restricted_isometry_constant, sparsity_bound_holds
from .metrics import PatternMetrics, element_reduction, pattern_deviation, peak_sidelobe_level
from .reference_patterns import ChebyshevSpec, chebyshev_excitations, load_fixture, taylor_kaiser_fixture

__version__ = "0.1.0"
