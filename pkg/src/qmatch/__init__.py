"""Selection among quantile-matching transformations by profile log likelihood.

A response vector is mapped through rank-based percentiles to the quantiles
of a candidate target distribution; a Gaussian linear model (fixed-effects
additive row+column, or balanced random-effects) is fitted to the result;
and targets are compared by the profiled log likelihood of the composite
transformation.  The package provides the target families, the percentile
machinery, both model fits, family profiling with refinement, likelihood
ratios with their first-order diagnostics, benchmark simulators and a CLI.
"""

__version__ = "0.1.0"

from .errors import DegenerateFitError, DomainError, NumericError, QmatchError
from .linmodel import (
    DesignSpec,
    ModelFit,
    ModelKind,
    ProjectionDecomposition,
    decompose,
    fit,
    fit_fixed,
    fit_random_balanced,
    fit_random_numeric,
    quadratic_form,
)
from .percentile import PercentileVector, percentiles, quantile_match
from .simdesign import SimConfig, SimOutput, cauchy_draw, simulate
from .targetdist import (
    Affine,
    AlphaBeta,
    Gaussian,
    Logistic,
    StudentT,
    TargetDistribution,
    Uniform,
    student_t_log_density,
)
from .translik import (
    CorrelationReport,
    EntropyQuadrature,
    GaussianUniformDiagnostics,
    ProfileCurve,
    ReducedProfileLoglik,
    boxcox_profile,
    correlation_report,
    entropy_quadrature,
    loglik_ratio,
    lr_diagnostics_gaussian_uniform,
    profile_alpha,
    profile_student_t,
    reduced_profile_loglik,
)

__all__ = [
    "__version__",
    "QmatchError", "DomainError", "DegenerateFitError", "NumericError",
    "TargetDistribution", "Gaussian", "Uniform", "Logistic", "StudentT",
    "AlphaBeta", "Affine", "student_t_log_density",
    "PercentileVector", "percentiles", "quantile_match",
    "DesignSpec", "ModelKind", "ModelFit", "ProjectionDecomposition",
    "decompose", "fit", "fit_fixed", "fit_random_balanced",
    "fit_random_numeric", "quadratic_form",
    "ReducedProfileLoglik", "ProfileCurve", "GaussianUniformDiagnostics",
    "EntropyQuadrature", "CorrelationReport",
    "reduced_profile_loglik", "loglik_ratio",
    "lr_diagnostics_gaussian_uniform", "profile_student_t", "profile_alpha",
    "boxcox_profile", "entropy_quadrature", "correlation_report",
    "SimConfig", "SimOutput", "simulate", "cauchy_draw",
]
