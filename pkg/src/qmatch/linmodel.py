"""Maximum-likelihood fits of a response on a balanced row-column grid.

Two model classes are supported.

Fixed effects: mean additive in row and column (mu_ij = a_i + b_j), errors
i.i.d. N(0, sigma^2).  The MLE is the classical two-way fit.

Random effects: mean a single intercept, covariance
Sigma = sigma2_R * ROW + sigma2_C * COL + sigma2 * I, where ROW and COL
indicate shared row / shared column.  On a balanced replicate-1 grid Sigma
is simultaneously diagonalized by the ANOVA decomposition; with

    lam_R = sigma2 + c * sigma2_R        (row-contrast space, dim r-1)
    lam_C = sigma2 + r * sigma2_C        (column-contrast space, dim c-1)
    lam_E = sigma2                       (interaction space, dim (r-1)(c-1))
    lam_0 = lam_R + lam_C - lam_E        (grand-mean direction, dim 1)

minus twice the profiled log likelihood (up to constants) is

    F = log lam_0 + d_R log lam_R + S_R/lam_R
                  + d_C log lam_C + S_C/lam_C
                  + d_E log lam_E + S_E/lam_E,

to be minimized over the cone lam_R >= lam_E, lam_C >= lam_E, lam_E > 0.
The nonnegativity constraints on sigma2_R and sigma2_C are handled by
enumerating all four active sets; each subproblem is smooth, three have
closed forms and the interior one is solved by damped Newton started at the
separable solution lam_k = S_k/d_k.  At every candidate the fitted
quadratic form equals n exactly, so the achieved log likelihood is
-(log det + n + n log 2pi)/2 throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .errors import DegenerateFitError, DomainError, NumericError

# Interaction variation below this share of the total is treated as an
# unbounded-likelihood (perfectly additive) transformation.
_DEGENERATE_REL = 1e-12


class ModelKind(str, enum.Enum):
    FIXED_EFFECTS = "fixed"
    RANDOM_EFFECTS = "random"


@dataclass(frozen=True, eq=False)
class DesignSpec:
    """Balanced r x c layout plus the model class used to fit it.

    The default layout is the column-major full grid: observation k sits in
    row k mod nrows, column k div nrows.  A custom layout may be given as
    explicit per-observation row/column indices covering each cell once.
    """

    nrows: int
    ncols: int
    model: ModelKind = ModelKind.FIXED_EFFECTS
    row_index: np.ndarray | None = None
    col_index: np.ndarray | None = None

    def __post_init__(self):
        if self.nrows < 2 or self.ncols < 2:
            raise DomainError("need at least 2 rows and 2 columns")
        if (self.row_index is None) != (self.col_index is None):
            raise DomainError("row_index and col_index must be given together")
        if self.row_index is not None:
            ri = np.asarray(self.row_index, dtype=np.intp)
            ci = np.asarray(self.col_index, dtype=np.intp)
            if ri.shape != (self.n,) or ci.shape != (self.n,):
                raise DomainError("layout index length must equal nrows*ncols")
            if ri.min() < 0 or ri.max() >= self.nrows or ci.min() < 0 or ci.max() >= self.ncols:
                raise DomainError("layout indices out of range")
            if np.unique(ri * self.ncols + ci).size != self.n:
                raise DomainError("each (row, col) cell must appear exactly once")
            object.__setattr__(self, "row_index", ri)
            object.__setattr__(self, "col_index", ci)

    @property
    def n(self) -> int:
        return self.nrows * self.ncols

    def rows_cols(self):
        if self.row_index is not None:
            return self.row_index, self.col_index
        k = np.arange(self.n)
        return k % self.nrows, k // self.nrows

    def with_model(self, model: ModelKind) -> "DesignSpec":
        return replace(self, model=ModelKind(model))


@dataclass(frozen=True)
class ProjectionDecomposition:
    """Squared norms of the centered data on the three contrast subspaces."""

    s_row: float
    s_col: float
    s_err: float
    d_row: int
    d_col: int
    d_err: int
    grand_mean: float


@dataclass(frozen=True, eq=False)
class ModelFit:
    kind: ModelKind
    log_det_sigma_hat: float
    sigma2: float
    sigma2_row: float | None
    sigma2_col: float | None
    mu_hat: np.ndarray
    max_loglik_core: float


def _grid(z, design: DesignSpec) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape != (design.n,):
        raise DomainError(f"response length {z.size} does not match design size {design.n}")
    rows, cols = design.rows_cols()
    g = np.empty((design.nrows, design.ncols))
    g[rows, cols] = z
    return g


def decompose(z, design: DesignSpec) -> ProjectionDecomposition:
    """Project the centered data onto row, column and interaction contrasts."""
    g = _grid(z, design)
    zbar = g.mean()
    rm = g.mean(axis=1) - zbar
    cm = g.mean(axis=0) - zbar
    resid = g - zbar - rm[:, None] - cm[None, :]
    return ProjectionDecomposition(
        s_row=float(design.ncols * np.sum(rm * rm)),
        s_col=float(design.nrows * np.sum(cm * cm)),
        s_err=float(np.sum(resid * resid)),
        d_row=design.nrows - 1,
        d_col=design.ncols - 1,
        d_err=(design.nrows - 1) * (design.ncols - 1),
        grand_mean=float(zbar),
    )


def _check_not_degenerate(z, dec: ProjectionDecomposition):
    # A spread within a few ulps of the data magnitude is rounding noise,
    # not variation; fitting it would produce absurd variance estimates.
    z = np.asarray(z, dtype=float)
    scale = float(np.max(np.abs(z)))
    if float(np.ptp(z)) <= 16.0 * np.finfo(float).eps * scale:
        raise DegenerateFitError("response is numerically constant")
    total = dec.s_row + dec.s_col + dec.s_err
    if total <= 0.0 or dec.s_err <= _DEGENERATE_REL * total:
        raise DegenerateFitError(
            "no interaction variation left after transformation; "
            "the likelihood is unbounded"
        )


def fit_fixed(z, design: DesignSpec) -> ModelFit:
    """ML fit of the additive fixed-effects model with spherical errors."""
    g = _grid(z, design)
    dec = decompose(z, design)
    _check_not_degenerate(z, dec)
    n = design.n
    sigma2 = dec.s_err / n
    rm = g.mean(axis=1)
    cm = g.mean(axis=0)
    mu_grid = rm[:, None] + cm[None, :] - dec.grand_mean
    rows, cols = design.rows_cols()
    log_det = n * math.log(sigma2)
    return ModelFit(
        kind=ModelKind.FIXED_EFFECTS,
        log_det_sigma_hat=log_det,
        sigma2=sigma2,
        sigma2_row=None,
        sigma2_col=None,
        mu_hat=mu_grid[rows, cols],
        max_loglik_core=-0.5 * (log_det + n * (1.0 + math.log(2.0 * math.pi))),
    )


def _objective(lam, dec: ProjectionDecomposition):
    lam_r, lam_c, lam_e = lam
    lam0 = lam_r + lam_c - lam_e
    if min(lam_r, lam_c, lam_e, lam0) <= 0.0:
        return math.inf
    return (
        math.log(lam0)
        + dec.d_row * math.log(lam_r) + dec.s_row / lam_r
        + dec.d_col * math.log(lam_c) + dec.s_col / lam_c
        + dec.d_err * math.log(lam_e) + dec.s_err / lam_e
    )


def _gradient(lam, dec: ProjectionDecomposition):
    lam_r, lam_c, lam_e = lam
    lam0 = lam_r + lam_c - lam_e
    return np.array([
        1.0 / lam0 + dec.d_row / lam_r - dec.s_row / lam_r**2,
        1.0 / lam0 + dec.d_col / lam_c - dec.s_col / lam_c**2,
        -1.0 / lam0 + dec.d_err / lam_e - dec.s_err / lam_e**2,
    ])


def _hessian(lam, dec: ProjectionDecomposition):
    lam_r, lam_c, lam_e = lam
    lam0 = lam_r + lam_c - lam_e
    a = 1.0 / lam0**2
    h = np.array([[-a, -a, a], [-a, -a, a], [a, a, -a]])
    h[0, 0] += -dec.d_row / lam_r**2 + 2.0 * dec.s_row / lam_r**3
    h[1, 1] += -dec.d_col / lam_c**2 + 2.0 * dec.s_col / lam_c**3
    h[2, 2] += -dec.d_err / lam_e**2 + 2.0 * dec.s_err / lam_e**3
    return h


def _interior_newton(dec: ProjectionDecomposition, tol=1e-10, max_iter=100):
    """Stationary point of F strictly inside the cone, or None.

    Damped Newton from the separable start lam_k = S_k/d_k (projected into
    the cone).  Iterates are kept strictly feasible; if the unconstrained
    stationary point lies outside the cone the search stalls on the
    boundary and is rejected here, which is fine because the boundary
    subproblems are enumerated separately.

    Once the gradient is small the objective is flat to machine precision,
    so the line search switches from requiring an objective decrease to
    requiring a gradient decrease; otherwise the last factor-of-ten of
    gradient reduction is unreachable and a genuinely interior optimum
    would be dropped.
    """
    lam_e0 = dec.s_err / dec.d_err
    lam = np.array([
        max(dec.s_row / dec.d_row, lam_e0),
        max(dec.s_col / dec.d_col, lam_e0),
        lam_e0,
    ])
    for _ in range(max_iter):
        g = _gradient(lam, dec)
        g_inf = np.max(np.abs(g))
        if g_inf < tol:
            return lam
        h = _hessian(lam, dec)
        try:
            step = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            step = -g
        if not np.all(np.isfinite(step)):
            step = -g
        t = 1.0
        f0 = _objective(lam, dec)
        for _ in range(60):
            cand = lam + t * step
            lam0 = cand[0] + cand[1] - cand[2]
            if cand[2] > 0 and cand[0] >= cand[2] and cand[1] >= cand[2] and lam0 > 0:
                if _objective(cand, dec) <= f0 or (
                    g_inf < 1e-6
                    and np.max(np.abs(_gradient(cand, dec))) < g_inf
                ):
                    break
            t *= 0.5
        else:
            return None
        lam = lam + t * step
    g = _gradient(lam, dec)
    return lam if np.max(np.abs(g)) < tol else None


def _solve_eigenvalues(dec: ProjectionDecomposition):
    """Minimize F over the cone by enumerating the four active sets.

    Works on scale-standardized sums of squares so the Newton gradient
    tolerance means the same thing for any data scale.
    """
    total = dec.s_row + dec.s_col + dec.s_err
    n = dec.d_row + dec.d_col + dec.d_err + 1
    scale = total / n
    sdec = ProjectionDecomposition(
        s_row=dec.s_row / scale, s_col=dec.s_col / scale, s_err=dec.s_err / scale,
        d_row=dec.d_row, d_col=dec.d_col, d_err=dec.d_err, grand_mean=0.0,
    )
    r = dec.d_row + 1
    c = dec.d_col + 1

    candidates = []
    # Both variance components at zero: every eigenvalue equal.
    lam = (sdec.s_row + sdec.s_col + sdec.s_err) / n
    candidates.append(np.array([lam, lam, lam]))
    # sigma2_row = 0: lam_R pinned to lam_E.
    lam_c = sdec.s_col / c
    lam_e = (sdec.s_row + sdec.s_err) / (sdec.d_row + sdec.d_err)
    if lam_c >= lam_e > 0.0:
        candidates.append(np.array([lam_e, lam_c, lam_e]))
    # sigma2_col = 0: lam_C pinned to lam_E.
    lam_r = sdec.s_row / r
    lam_e = (sdec.s_col + sdec.s_err) / (sdec.d_col + sdec.d_err)
    if lam_r >= lam_e > 0.0:
        candidates.append(np.array([lam_r, lam_e, lam_e]))
    # Interior stationary point.
    interior = _interior_newton(sdec)
    if interior is not None:
        candidates.append(interior)

    best = min(candidates, key=lambda lam: _objective(lam, sdec))
    return best * scale


def _random_fit_from_eigenvalues(z, design, dec, lam):
    lam_r, lam_c, lam_e = lam
    n = design.n
    log_det = (
        math.log(lam_r + lam_c - lam_e)
        + dec.d_row * math.log(lam_r)
        + dec.d_col * math.log(lam_c)
        + dec.d_err * math.log(lam_e)
    )
    return ModelFit(
        kind=ModelKind.RANDOM_EFFECTS,
        log_det_sigma_hat=log_det,
        sigma2=lam_e,
        sigma2_row=max((lam_r - lam_e) / design.ncols, 0.0),
        sigma2_col=max((lam_c - lam_e) / design.nrows, 0.0),
        mu_hat=np.full(n, dec.grand_mean),
        max_loglik_core=-0.5 * (log_det + n * (1.0 + math.log(2.0 * math.pi))),
    )


def fit_random_balanced(z, design: DesignSpec) -> ModelFit:
    """ML fit of the intercept-plus-two-variance-components model."""
    dec = decompose(z, design)
    _check_not_degenerate(z, dec)
    lam = _solve_eigenvalues(dec)
    return _random_fit_from_eigenvalues(z, design, dec, lam)


def fit_random_numeric(z, design: DesignSpec) -> ModelFit:
    """Same model as fit_random_balanced via a derivative-free optimizer.

    Kept as an independent route for cross-checking the active-set solver.
    """
    dec = decompose(z, design)
    _check_not_degenerate(z, dec)
    total = dec.s_row + dec.s_col + dec.s_err
    n = design.n
    scale = total / n
    sdec = ProjectionDecomposition(
        s_row=dec.s_row / scale, s_col=dec.s_col / scale, s_err=dec.s_err / scale,
        d_row=dec.d_row, d_col=dec.d_col, d_err=dec.d_err, grand_mean=0.0,
    )
    r, c = design.nrows, design.ncols

    def neg2ll(x):
        s2, s2r, s2c = x
        lam = np.array([s2 + c * s2r, s2 + r * s2c, s2])
        return _objective(lam, sdec)

    x0 = np.array([
        sdec.s_err / sdec.d_err,
        max(sdec.s_row / sdec.d_row - sdec.s_err / sdec.d_err, 0.0) / c,
        max(sdec.s_col / sdec.d_col - sdec.s_err / sdec.d_err, 0.0) / r,
    ])
    res = optimize.minimize(
        neg2ll, x0, method="Nelder-Mead",
        bounds=[(1e-14, None), (0.0, None), (0.0, None)],
        options={"xatol": 1e-13, "fatol": 1e-13, "maxfev": 40000},
    )
    if not res.success:
        raise NumericError("variance-component optimizer did not converge", best=res.x)
    s2, s2r, s2c = res.x
    lam = np.array([s2 + c * s2r, s2 + r * s2c, s2]) * scale
    return _random_fit_from_eigenvalues(z, design, dec, lam)


def fit(z, design: DesignSpec) -> ModelFit:
    """Dispatch on the design's model kind."""
    if design.model == ModelKind.FIXED_EFFECTS:
        return fit_fixed(z, design)
    return fit_random_balanced(z, design)


def quadratic_form(z, fit: ModelFit, design: DesignSpec) -> float:
    """(z - mu_hat)' Sigma^{-1} (z - mu_hat) for the fit's parameters.

    Evaluated in the eigenbasis: each contrast subspace contributes its
    squared projection divided by its eigenvalue.  At an interior MLE this
    equals n.
    """
    z = np.asarray(z, dtype=float)
    resid = z - fit.mu_hat
    dec = decompose(resid, design)
    if fit.kind == ModelKind.FIXED_EFFECTS:
        lam_r = lam_c = lam_e = fit.sigma2
    else:
        lam_e = fit.sigma2
        lam_r = fit.sigma2 + design.ncols * fit.sigma2_row
        lam_c = fit.sigma2 + design.nrows * fit.sigma2_col
    lam0 = lam_r + lam_c - lam_e
    if min(lam_r, lam_c, lam_e, lam0) <= 0.0:
        raise DomainError("quadratic form needs strictly positive eigenvalues")
    mean_part = design.n * dec.grand_mean**2 / lam0
    return float(
        mean_part + dec.s_row / lam_r + dec.s_col / lam_c + dec.s_err / lam_e
    )


def dense_covariance(design: DesignSpec, sigma2, sigma2_row, sigma2_col) -> np.ndarray:
    """Assemble the n x n covariance explicitly (test oracle for small n)."""
    rows, cols = design.rows_cols()
    same_row = rows[:, None] == rows[None, :]
    same_col = cols[:, None] == cols[None, :]
    return (
        sigma2 * np.eye(design.n)
        + sigma2_row * same_row
        + sigma2_col * same_col
    )
