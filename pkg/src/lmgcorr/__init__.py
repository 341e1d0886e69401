"""Gaussian ground-state correlations of the Lipkin-Meshkov-Glick model.

The package turns a model point (anisotropy ``gamma``, field ``h`` and a bi-
or tripartition of the spins) into a two-mode covariance matrix and evaluates
classical correlation, Gaussian discord, entanglement of formation and
logarithmic negativity.  :mod:`lmgcorr.oracle` provides exact finite-N
results for comparison and :mod:`lmgcorr.cli` drives parameter sweeps.
"""

from .errors import (
    ConsistencyError,
    DimensionTooLarge,
    DomainError,
    InvalidParameter,
    InvalidPartition,
    LMGError,
    NonPhysical,
    SingularPoint,
)
from .gaussian import StandardForm, TwoModeCovariance, covariance, standard_form, symplectic_eigenvalues
from .measures import (
    CorrelationReport,
    classical_correlation,
    correlations,
    emin,
    entropy_f,
    eof_bipartite,
    eof_tripartite,
    log_negativity,
    mutual_information,
    quantum_discord,
)
from .model import ModelPoint, alpha, alpha_excess, mean_field_angle, quadratic_params

__all__ = [
    "ConsistencyError",
    "CorrelationReport",
    "DimensionTooLarge",
    "DomainError",
    "InvalidParameter",
    "InvalidPartition",
    "LMGError",
    "ModelPoint",
    "NonPhysical",
    "SingularPoint",
    "StandardForm",
    "TwoModeCovariance",
    "alpha",
    "alpha_excess",
    "classical_correlation",
    "correlations",
    "covariance",
    "emin",
    "entropy_f",
    "eof_bipartite",
    "eof_tripartite",
    "log_negativity",
    "mean_field_angle",
    "mutual_information",
    "quadratic_params",
    "quantum_discord",
    "standard_form",
    "symplectic_eigenvalues",
]
