"""Profile log likelihoods of quantile-matching transformations.

For a target G with quantile function Q, the transformed response is
z_i = Q(p_i) with p_i the empirical percentile of y_i.  Up to terms common
to every target (the percentile-function derivative and the Gaussian
constants), the profiled log likelihood of the transformation is

    value = det_term + jacobian_term
    det_term      = -1/2 log det Sigma_hat   (from the fitted model)
    jacobian_term = sum_i log Q'(p_i)        (change of variables)

This "reduced" form is the quantity every comparison in the package uses;
differences of it between two targets are full log-likelihood ratios
because the dropped terms cancel.  All statistics depend on y only through
its rank vector, so any strictly increasing relabeling of the data leaves
them bit-for-bit unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, DomainError, NumericError
from .linmodel import DesignSpec, ModelKind, fit
from .percentile import PercentileVector, percentiles
from .targetdist import (
    AlphaBeta,
    Gaussian,
    StudentT,
    TargetDistribution,
    Uniform,
)

DEFAULT_T_GRID = np.arange(51) * 0.02          # inv_nu in [0, 1]
DEFAULT_ALPHA_GRID = np.arange(-100, 101) * 0.01
DEFAULT_BOXCOX_GRID = np.arange(-20, 21) * 0.05


@dataclass(frozen=True)
class ReducedProfileLoglik:
    target_label: str
    model: ModelKind
    det_term: float
    jacobian_term: float
    value: float


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    family: str
    model: ModelKind
    grid: np.ndarray
    values: np.ndarray          # NaN marks a failed grid point
    det_terms: np.ndarray
    jacobian_terms: np.ndarray
    argmax_param: float
    argmax_value: float
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class GaussianUniformDiagnostics:
    """How well the first-order constants track the exact two terms of the
    Gaussian-to-uniform log-likelihood ratio."""

    n: int
    det_term: float                 # -1/2 log det(Sigma_gauss Sigma_unif^{-1})
    det_term_linear: float          # -1.242 n
    correction_term: float          # sum log Q'_gauss(p_i), exact
    correction_linear: float        # +1.419 n
    lr: float                       # det_term + correction_term


@dataclass(frozen=True)
class EntropyQuadrature:
    n: int
    quadrature: float
    exact: float | None
    gap: float | None


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    labels: tuple[str, ...]
    correlations: np.ndarray
    n: int


def _reduced(pc: PercentileVector, dist: TargetDistribution, design: DesignSpec):
    z = np.asarray(dist.quantile(pc.p))
    jacobian = float(np.sum(dist.log_quantile_derivative(pc.p)))
    model_fit = fit(z, design)
    det_term = -0.5 * model_fit.log_det_sigma_hat
    return ReducedProfileLoglik(
        target_label=dist.label(),
        model=design.model,
        det_term=det_term,
        jacobian_term=jacobian,
        value=det_term + jacobian,
    )


def reduced_profile_loglik(y, dist: TargetDistribution, design: DesignSpec) -> ReducedProfileLoglik:
    return _reduced(percentiles(y), dist, design)


def loglik_ratio(y, dist_a: TargetDistribution, dist_b: TargetDistribution,
                 design: DesignSpec) -> float:
    """Log-likelihood ratio of target a over target b (positive favors a)."""
    pc = percentiles(y)
    return _reduced(pc, dist_a, design).value - _reduced(pc, dist_b, design).value


def lr_diagnostics_gaussian_uniform(y, design: DesignSpec) -> GaussianUniformDiagnostics:
    pc = percentiles(y)
    a = _reduced(pc, Gaussian(), design)
    b = _reduced(pc, Uniform(), design)
    n = pc.n
    det = a.det_term - b.det_term
    return GaussianUniformDiagnostics(
        n=n,
        det_term=det,
        det_term_linear=-1.242 * n,
        correction_term=a.jacobian_term,
        correction_linear=1.419 * n,
        lr=det + a.jacobian_term,
    )


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo, mid, hi, xtol):
    """Golden-section maximization given a bracketing triple lo < mid < hi."""
    x1, x2 = lo, hi
    best_x, best_f = mid, f(mid)
    while (x2 - x1) > xtol:
        d = _GOLDEN * (x2 - x1)
        a, b = x2 - d, x1 + d
        fa, fb = f(a), f(b)
        if fa >= fb:
            x2 = b
            if fa > best_f:
                best_x, best_f = a, fa
        else:
            x1 = a
            if fb > best_f:
                best_x, best_f = b, fb
    return best_x, best_f


def _sweep(family, grid, evaluate, design, refine, refine_xtol=1e-3):
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DomainError("parameter grid must be nonempty")
    values = np.full(grid.size, np.nan)
    dets = np.full(grid.size, np.nan)
    jacs = np.full(grid.size, np.nan)
    warnings = []
    for i, param in enumerate(grid):
        try:
            r = evaluate(float(param))
        except (DegenerateFitError, NumericError) as exc:
            warnings.append(f"{family} grid point {param:g} failed: {exc}")
            continue
        values[i], dets[i], jacs[i] = r.value, r.det_term, r.jacobian_term
    ok = np.isfinite(values)
    if ok.sum() < 0.8 * grid.size:
        raise NumericError(
            f"{family} profile failed at {grid.size - ok.sum()} of {grid.size} grid points"
        )
    i_best = int(np.nanargmax(values))
    argmax_param = float(grid[i_best])
    argmax_value = float(values[i_best])
    if refine and 0 < i_best < grid.size - 1 and ok[i_best - 1] and ok[i_best + 1]:
        x, v = _golden_max(
            lambda t: evaluate(t).value,
            float(grid[i_best - 1]), argmax_param, float(grid[i_best + 1]),
            refine_xtol,
        )
        if v > argmax_value:
            argmax_param, argmax_value = float(x), float(v)
    return ProfileCurve(
        family=family,
        model=design.model,
        grid=grid,
        values=values,
        det_terms=dets,
        jacobian_terms=jacs,
        argmax_param=argmax_param,
        argmax_value=argmax_value,
        warnings=tuple(warnings),
    )


def profile_student_t(y, design: DesignSpec, grid=None, refine=False) -> ProfileCurve:
    """Reduced profile over the t family, swept in inv_nu = 1/nu."""
    if grid is None:
        grid = DEFAULT_T_GRID
    grid = np.asarray(grid, dtype=float)
    if grid.size and (grid.min() < 0.0 or grid.max() > 1.0):
        raise DomainError("inv_nu grid must lie in [0, 1]")
    pc = percentiles(y)
    return _sweep(
        "student_t", grid,
        lambda inv_nu: _reduced(pc, StudentT(inv_nu), design),
        design, refine,
    )


def profile_alpha(y, design: DesignSpec, grid=None, refine=False) -> ProfileCurve:
    """Reduced profile over the alpha-beta family along the diagonal alpha = beta."""
    if grid is None:
        grid = DEFAULT_ALPHA_GRID
    grid = np.asarray(grid, dtype=float)
    if grid.size and (grid.min() < -1.0 or grid.max() > 1.0):
        raise DomainError("alpha grid must lie in [-1, 1]")
    pc = percentiles(y)
    return _sweep(
        "alpha_beta_diagonal", grid,
        lambda a: _reduced(pc, AlphaBeta(a, a), design),
        design, refine,
    )


def boxcox_profile(y, design: DesignSpec, grid=None) -> ProfileCurve:
    """Power-transformation profile on the raw (positive) response.

    For exponent g the response is transformed to (y^g - 1)/g (log y at
    g = 0), the model is fitted, and the profile value is
    -1/2 log det Sigma_hat + (g - 1) sum log y.  This comparator operates
    on the data values themselves, not on ranks.
    """
    y = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(y)) or np.any(y <= 0.0):
        raise DomainError("power-transformation profile requires strictly positive data")
    if grid is None:
        grid = DEFAULT_BOXCOX_GRID
    slog = float(np.sum(np.log(y)))

    @dataclass(frozen=True)
    class _Point:
        value: float
        det_term: float
        jacobian_term: float

    def evaluate(g):
        z = np.log(y) if g == 0.0 else (np.power(y, g) - 1.0) / g
        det_term = -0.5 * fit(z, design).log_det_sigma_hat
        jac = (g - 1.0) * slog
        return _Point(value=det_term + jac, det_term=det_term, jacobian_term=jac)

    return _sweep("boxcox", grid, evaluate, design, refine=False)


def entropy_quadrature(dist: TargetDistribution, n: int) -> EntropyQuadrature:
    """Midpoint-rule approximation to the entropy of the target.

    -(1/n) sum_i log g(Q((2i-1)/2n)) = (1/n) sum_i log Q'((2i-1)/2n), the
    value the per-observation jacobian term approaches as n grows.
    """
    if n < 10:
        raise DomainError("entropy quadrature needs n >= 10")
    p = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    quadrature = float(np.mean(dist.log_quantile_derivative(p)))
    exact = dist.entropy()
    gap = None if exact is None else quadrature - exact
    return EntropyQuadrature(n=n, quadrature=quadrature, exact=exact, gap=gap)


def correlation_report(y, dists) -> CorrelationReport:
    """Pearson correlation of the raw response with each quantile-matched
    version of itself."""
    dists = list(dists)
    if not dists:
        raise DomainError("at least one target distribution is required")
    y = np.asarray(y, dtype=float)
    if y.size < 3:
        raise DomainError("correlation report needs n >= 3")
    pc = percentiles(y)
    yc = y - y.mean()
    ss_y = float(yc @ yc)
    if ss_y == 0.0:
        raise DomainError("response has zero variance")
    cors = np.empty(len(dists))
    for j, dist in enumerate(dists):
        t = np.asarray(dist.quantile(pc.p))
        tc = t - t.mean()
        ss_t = float(tc @ tc)
        if ss_t == 0.0:
            raise DomainError(f"transform {dist.label()} has zero variance")
        cors[j] = float(yc @ tc) / math.sqrt(ss_y * ss_t)
    return CorrelationReport(
        labels=tuple(d.label() for d in dists), correlations=cors, n=int(y.size)
    )
