"""Exact moments of complex polynomials on [0, 1] and their generating function."""

from .errors import (
    BlockedPathError,
    CoincidentRootsError,
    DomainError,
    FitDegenerateError,
    InputError,
    InsufficientDataError,
    NoConvergenceError,
    NumericError,
    PoleOnContourError,
    PolyMomentsError,
    PolySyntaxError,
    ResourceLimitError,
    RootResidualError,
    StepUnderflowError,
)
from .polynomial import ComplexRational, Polynomial, parse_poly
from .moments import MomentSequence, first_nonzero_index, moment, moment_sequence, scale_law_check
from .spectrum import CriticalSet, SupNorm, critical_set, roots, sup_norm
from .continuation import (
    FValue,
    RootBundle,
    TauPath,
    decay_probe,
    f_partial_fraction,
    f_quadrature,
    f_series,
    monodromy,
    multiplicity_slope,
    plan_path,
    track_roots,
)
from .growth import GrowthEstimate, bound_check, conjecture_check, estimate_growth, real_case_check
from .lab import ConjectureRecord, GeneratorConfig, generate_corpus, run_sweep

__version__ = "0.1.0"
