"""Target distributions for quantile matching.

Every likelihood computation in this package needs exactly two ingredients
from a target law G: the quantile function Q = G^{-1} and the log of its
derivative, log Q'(p) = -log g(Q(p)).  Each target exposes both, plus a CDF
where a closed form exists (used by round-trip checks) and the differential
entropy where it is known analytically (used by quadrature diagnostics).

Families:

* ``Gaussian``, ``Uniform``, ``Logistic`` -- fixed shapes.
* ``StudentT`` -- parametrized by ``inv_nu`` = 1/nu in [0, 1], so the
  Gaussian (inv_nu = 0) and the Cauchy (inv_nu = 1) are both ordinary
  points of the family and a profile search runs over a compact interval.
* ``AlphaBeta`` -- the two-parameter quantile family
  Q(p) = (p^alpha - 1)/alpha - ((1-p)^beta - 1)/beta, whose alpha = beta = 0
  limit is the logistic quantile.
* ``Affine`` -- shift/scale wrapper around any target, used to verify that
  fitted log likelihoods do not depend on the affine representative.

Numerical notes.  Quantiles at parameter values that admit closed forms
dispatch to those closed forms exactly: ``StudentT(0)`` runs the same code
as ``Gaussian`` (bit-for-bit equal results), ``StudentT(1)`` uses the
tangent in degree arguments so that the quartiles are exact (tandg(45) == 1,
whereas tan(pi/4) rounds to 0.999...), and ``AlphaBeta(0, 0)`` runs the
logistic code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import DomainError

LOG_2PI = math.log(2.0 * math.pi)


def _as_prob(p):
    """Validate probabilities and return (array, was_scalar)."""
    arr = np.asarray(p, dtype=float)
    bad = ~np.isfinite(arr) | (arr <= 0.0) | (arr >= 1.0)
    if np.any(bad):
        raise DomainError("probabilities must lie strictly inside (0, 1)")
    return arr, arr.ndim == 0


def _ret(out, scalar):
    return float(out) if scalar else out


# Shared closed forms.  Logistic and the alpha=beta=0 member of the
# alpha-beta family must agree bit-for-bit, so both call these.

def _logistic_q(p):
    return np.log(p) - np.log1p(-p)


def _logistic_lqd(p):
    return -(np.log(p) + np.log1p(-p))


def _gaussian_lqd(p):
    q = sc.ndtri(p)
    return 0.5 * LOG_2PI + 0.5 * q * q


def student_t_log_density(inv_nu, x):
    """Log density of the Student-t law with nu = 1/inv_nu degrees of freedom.

    Requires inv_nu > 0; the Gaussian limit has its own closed form and is
    not evaluated through this routine.
    """
    if not (0.0 < inv_nu <= 1.0):
        raise DomainError("student_t_log_density requires 0 < inv_nu <= 1")
    x = np.asarray(x, dtype=float)
    nu = 1.0 / inv_nu
    out = (
        sc.gammaln((nu + 1.0) / 2.0)
        - sc.gammaln(nu / 2.0)
        - 0.5 * math.log(nu * math.pi)
        - (nu + 1.0) / 2.0 * np.log1p(x * x / nu)
    )
    return float(out) if out.ndim == 0 else out


class TargetDistribution:
    """Common interface: quantile, log_quantile_derivative, cdf, entropy."""

    kind = "abstract"

    def quantile(self, p):
        raise NotImplementedError

    def log_quantile_derivative(self, p):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError(f"{self.kind} has no implemented CDF")

    def entropy(self):
        """Differential entropy in nats, or None when no closed form is known."""
        return None

    def label(self):
        return self.kind


@dataclass(frozen=True)
class Gaussian(TargetDistribution):
    kind = "gaussian"

    def quantile(self, p):
        p, s = _as_prob(p)
        return _ret(sc.ndtri(p), s)

    def log_quantile_derivative(self, p):
        p, s = _as_prob(p)
        return _ret(_gaussian_lqd(p), s)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = sc.ndtr(x)
        return float(out) if out.ndim == 0 else out

    def entropy(self):
        return 0.5 * (1.0 + LOG_2PI)


@dataclass(frozen=True)
class Uniform(TargetDistribution):
    kind = "uniform"

    def quantile(self, p):
        p, s = _as_prob(p)
        return _ret(p.copy(), s)

    def log_quantile_derivative(self, p):
        p, s = _as_prob(p)
        return _ret(np.zeros_like(p), s)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip(x, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out

    def entropy(self):
        return 0.0


@dataclass(frozen=True)
class Logistic(TargetDistribution):
    kind = "logistic"

    def quantile(self, p):
        p, s = _as_prob(p)
        return _ret(_logistic_q(p), s)

    def log_quantile_derivative(self, p):
        p, s = _as_prob(p)
        return _ret(_logistic_lqd(p), s)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = sc.expit(x)
        return float(out) if out.ndim == 0 else out

    def entropy(self):
        return 2.0


@dataclass(frozen=True)
class StudentT(TargetDistribution):
    """Student-t family indexed by the reciprocal degrees of freedom.

    ``inv_nu = 0`` is the Gaussian (dispatched to the Gaussian code path so
    results are bit-identical), ``inv_nu = 1`` the Cauchy.
    """

    inv_nu: float

    kind = "student_t"

    def __post_init__(self):
        if not (np.isfinite(self.inv_nu) and 0.0 <= self.inv_nu <= 1.0):
            raise DomainError("inv_nu must lie in [0, 1]")

    @classmethod
    def from_nu(cls, nu):
        if not (nu >= 1.0):
            raise DomainError("nu must be >= 1 (inv_nu in [0, 1])")
        return cls(0.0 if math.isinf(nu) else 1.0 / nu)

    def quantile(self, p):
        p, s = _as_prob(p)
        if self.inv_nu == 0.0:
            return _ret(sc.ndtri(p), s)
        if self.inv_nu == 1.0:
            # Degree-argument tangent keeps the Cauchy quartiles exact.
            return _ret(sc.tandg(180.0 * (p - 0.5)), s)
        return _ret(sc.stdtrit(1.0 / self.inv_nu, p), s)

    def log_quantile_derivative(self, p):
        p, s = _as_prob(p)
        if self.inv_nu == 0.0:
            return _ret(_gaussian_lqd(p), s)
        q = self.quantile(p)
        return _ret(-student_t_log_density(self.inv_nu, q), s)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.inv_nu == 0.0:
            out = sc.ndtr(x)
        elif self.inv_nu == 1.0:
            out = 0.5 + np.arctan(x) / math.pi
        else:
            out = sc.stdtr(1.0 / self.inv_nu, x)
        return float(out) if out.ndim == 0 else out

    def entropy(self):
        if self.inv_nu == 0.0:
            return 0.5 * (1.0 + LOG_2PI)
        nu = 1.0 / self.inv_nu
        return float(
            (nu + 1.0) / 2.0 * (sc.digamma((nu + 1.0) / 2.0) - sc.digamma(nu / 2.0))
            + 0.5 * math.log(nu)
            + sc.betaln(0.5, nu / 2.0)
        )

    def label(self):
        if self.inv_nu == 0.0:
            return "t(inv_nu=0)"
        return f"t(nu={1.0 / self.inv_nu:g})"


def _power_limb(a, x):
    # (x^a - 1)/a with the a -> 0 limit log x; expm1 keeps small a accurate.
    if a == 0.0:
        return np.log(x)
    return np.expm1(a * np.log(x)) / a


@dataclass(frozen=True)
class AlphaBeta(TargetDistribution):
    """Quantile family Q(p) = (p^alpha - 1)/alpha - ((1-p)^beta - 1)/beta.

    The subtraction of 1/alpha and 1/beta is an affine shift, irrelevant to
    every fitted likelihood, chosen so the alpha, beta -> 0 limits exist in
    code.  alpha = beta = 0 runs the logistic closed forms.
    """

    alpha: float
    beta: float

    kind = "alpha_beta"

    def __post_init__(self):
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if not (np.isfinite(v) and -1.0 <= v <= 1.0):
                raise DomainError(f"{name} must lie in [-1, 1]")

    def quantile(self, p):
        p, s = _as_prob(p)
        if self.alpha == 0.0 and self.beta == 0.0:
            return _ret(_logistic_q(p), s)
        return _ret(_power_limb(self.alpha, p) - _power_limb(self.beta, 1.0 - p), s)

    def log_quantile_derivative(self, p):
        # Q'(p) = p^(alpha-1) + (1-p)^(beta-1)
        p, s = _as_prob(p)
        if self.alpha == 0.0 and self.beta == 0.0:
            return _ret(_logistic_lqd(p), s)
        out = np.logaddexp(
            (self.alpha - 1.0) * np.log(p), (self.beta - 1.0) * np.log1p(-p)
        )
        return _ret(out, s)

    def entropy(self):
        if self.alpha == 0.0 and self.beta == 0.0:
            return 2.0
        return None

    def label(self):
        return f"alpha_beta(alpha={self.alpha:g},beta={self.beta:g})"


@dataclass(frozen=True)
class Affine(TargetDistribution):
    """The law of shift + scale * X for X distributed as ``base``.

    scale may be negative (the law of a decreasing rescaling is still a
    distribution); scale = 0 is rejected.
    """

    base: TargetDistribution
    shift: float = 0.0
    scale: float = 1.0

    kind = "affine"

    def __post_init__(self):
        if not (np.isfinite(self.shift) and np.isfinite(self.scale)) or self.scale == 0.0:
            raise DomainError("affine scale must be finite and nonzero")

    def quantile(self, p):
        p, s = _as_prob(p)
        if self.scale > 0.0:
            q = self.base.quantile(p)
        else:
            q = self.base.quantile(1.0 - p)
        return _ret(self.shift + self.scale * np.asarray(q), s)

    def log_quantile_derivative(self, p):
        p, s = _as_prob(p)
        if self.scale > 0.0:
            lqd = self.base.log_quantile_derivative(p)
        else:
            lqd = self.base.log_quantile_derivative(1.0 - p)
        return _ret(math.log(abs(self.scale)) + np.asarray(lqd), s)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.shift) / self.scale
        out = np.asarray(self.base.cdf(z))
        if self.scale < 0.0:
            out = 1.0 - out
        return float(out) if out.ndim == 0 else out

    def entropy(self):
        h = self.base.entropy()
        if h is None:
            return None
        return h + math.log(abs(self.scale))

    def label(self):
        return f"affine({self.shift:g}+{self.scale:g}*{self.base.label()})"
