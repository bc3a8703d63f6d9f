"""Empirical percentile values at the observed data points.

For a sample of size n the percentile of an observation is the average of
the left and right limits of the empirical CDF there,

    p_i = (F(y_i-) + F(y_i+)) / 2,

which for distinct values is the classical rankit grid (2i - 1)/(2n) and
for a group of k ties occupying sorted positions a .. a+k-1 is the shared
value (2a + k - 2)/(2n).  Everything downstream consumes these percentiles
only at the data points; no interpolant between them is ever constructed,
so every reported statistic depends on the data through its rank vector
alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DomainError
from .targetdist import TargetDistribution


@dataclass(frozen=True, eq=False)
class PercentileVector:
    p: np.ndarray  # values in (0,1), aligned with the input vector
    n: int


def percentiles(y) -> PercentileVector:
    """Percentile values of each observation within its own sample."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise DomainError("input must be a nonempty 1-d vector")
    if not np.all(np.isfinite(y)):
        raise DomainError("input values must be finite")
    # Midranks give (F(y-) + F(y+))/2 directly: a tie group at sorted
    # positions a..a+k-1 has midrank a + (k-1)/2, hence p = (2a+k-2)/(2n).
    r = rankdata(y, method="average")
    p = (2.0 * r - 1.0) / (2.0 * y.size)
    return PercentileVector(p=p, n=int(y.size))


def quantile_match(y, dist: TargetDistribution) -> np.ndarray:
    """Map each observation to the target quantile at its percentile."""
    return np.asarray(dist.quantile(percentiles(y).p))
