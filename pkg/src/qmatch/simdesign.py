"""Seedable simulation of the two benchmark experiments.

Data are generated on a balanced nrows x ncols grid as

    y_k = intercept + a[row(k)] + b[col(k)] + noise_sd * e_k

with the row effects a, column effects b drawn i.i.d. from the chosen
effect distribution (standard Gaussian or standard Cauchy) and e_k i.i.d.
standard Gaussian.  Observations are laid out column-major: k runs down
each column in turn, so row(k) = k mod nrows and col(k) = k div nrows.

Reproducibility: all draws come from numpy's PCG64 generator seeded with
``seed``.  Uniforms are taken as (integer53 + 0.5) / 2^53, which never hits
0 or 1, and variates are produced by inverse CDF through the same quantile
routines the targets use.  Draw order is fixed: row effects, then column
effects, then noise.  Equal seeds therefore give bit-equal outputs on any
platform with the same numpy/scipy builds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special as sc

from .errors import DomainError
from .linmodel import DesignSpec
from .targetdist import StudentT

EFFECT_DISTS = ("gaussian", "cauchy")

_CAUCHY = StudentT(1.0)


@dataclass(frozen=True)
class SimConfig:
    nrows: int = 50
    ncols: int = 30
    effect_dist: str = "gaussian"
    intercept: float = 5.0
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.nrows < 2 or self.ncols < 2:
            raise DomainError("need at least 2 rows and 2 columns")
        if self.effect_dist not in EFFECT_DISTS:
            raise DomainError(f"effect_dist must be one of {EFFECT_DISTS}")
        if not (self.noise_sd > 0.0 and np.isfinite(self.noise_sd)):
            raise DomainError("noise_sd must be positive")
        if not np.isfinite(self.intercept):
            raise DomainError("intercept must be finite")
        if not (0 <= int(self.seed) < 2**64):
            raise DomainError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class SimOutput:
    y: np.ndarray
    design: DesignSpec
    true_mu: np.ndarray       # noiseless mean minus the intercept
    config: SimConfig = field(repr=False, default=None)


def cauchy_draw(u):
    """Standard Cauchy variate by inverse CDF: tan(pi (u - 1/2))."""
    return _CAUCHY.quantile(u)


def _uniforms(rng, size):
    # Strictly interior uniforms: (k + 0.5)/2^53 for k in [0, 2^53).
    return (rng.integers(0, 1 << 53, size=size) + 0.5) * 2.0**-53


def simulate(config: SimConfig) -> SimOutput:
    rng = np.random.default_rng(config.seed)
    if config.effect_dist == "gaussian":
        draw = sc.ndtri
    else:
        draw = cauchy_draw
    row_eff = np.asarray(draw(_uniforms(rng, config.nrows)))
    col_eff = np.asarray(draw(_uniforms(rng, config.ncols)))
    noise = config.noise_sd * sc.ndtri(_uniforms(rng, config.nrows * config.ncols))
    design = DesignSpec(nrows=config.nrows, ncols=config.ncols)
    rows, cols = design.rows_cols()
    true_mu = row_eff[rows] + col_eff[cols]
    return SimOutput(
        y=config.intercept + true_mu + noise,
        design=design,
        true_mu=true_mu,
        config=config,
    )
