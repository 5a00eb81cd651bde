"""Entanglement and Gaussian discord of a two-mode squeezed state seen by an accelerated observer."""

from .errors import (
    BracketError,
    BranchInconsistency,
    ConfigError,
    ConvergenceFailure,
    DomainError,
    NonPhysical,
    SpectralMismatch,
    UnruhCorrError,
)
from .field_modes import (
    GaussianModeSpec,
    OverlapSet,
    QuadratureConfig,
    minkowski_overlap,
    overlap_set_local,
    overlap_set_unruh,
    packet_normalization,
    rindler_packet_overlaps,
)
from .gaussian_core import (
    CorrelationMeasures,
    SymplecticInvariants,
    correlation_measures,
    entropy_f,
    gaussian_discord,
    local_invariants,
    log_negativity,
    symplectic_eigenvalues,
)
from .scenario import (
    CorrelationRecord,
    ScenarioConfig,
    UnruhMode,
    assemble_covariance,
    correlations,
    evaluate_point,
    residual_discord_limit,
    separability_residual,
    sudden_death_acceleration,
    unruh_flatness_check,
)
from .special import complex_log_gamma

__version__ = "0.1.0"
