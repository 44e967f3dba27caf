"""
Scale-band discretization of the u-integral.

Band j covers (j du, (j+1) du] and is represented at its midpoint u_j;
its layer has the stationary covariance w_j du K(e^{u_j} |x - y|) with
w_j = 1 - a e^{-alpha u_j}. On the torus the kernel is periodized.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np

from gmc_lab.exceptions import ParameterError

logger = logging.getLogger(__name__)

MAX_DELTA_U = 0.5
ALIGNMENT_TOL = 1e-9


@dataclass(frozen=True)
class BandSpec:
    u_center: float
    delta_u: float
    weight: float

    @property
    def lower(self):
        return self.u_center - 0.5 * self.delta_u

    @property
    def upper(self):
        return self.u_center + 0.5 * self.delta_u

    @property
    def variance(self):
        return self.weight * self.delta_u

    def is_white(self, grid):
        """True once the kernel support e^{-u} is within one grid spacing."""
        return math.exp(-self.u_center) <= grid.spacing


def band_count(t, delta_u):
    """Number of whole bands in (0, t]; rejects depths off the band lattice."""
    if t < 0:
        raise ParameterError(f"depth must be nonnegative, got {t}")
    count = round(t / delta_u)
    if abs(count * delta_u - t) > ALIGNMENT_TOL:
        raise ParameterError(f"depth {t} is not a multiple of delta_u={delta_u}")
    return int(count)


def band_layout(params, t_max, delta_u):
    if not 0.0 < delta_u <= MAX_DELTA_U:
        raise ParameterError(f"delta_u must lie in (0, {MAX_DELTA_U}], got {delta_u}")
    bands = []
    for j in range(band_count(t_max, delta_u)):
        u = (j + 0.5) * delta_u
        bands.append(BandSpec(u_center=u, delta_u=delta_u, weight=float(params.band_weight(u))))
    return tuple(bands)


def bands_below(bands, t):
    return sum(1 for band in bands if band.u_center < t)


def periodized_kernel(seed, grid, scale):
    """sum over images n in {0,1}^d of K(scale |x - n|), x over the torus offsets."""
    coords = grid.coordinates
    total = np.zeros(grid.shape)
    for image in np.ndindex(*([2] * grid.dim)):
        squared = sum((c - n) ** 2 for c, n in zip(coords, image))
        total += seed.value(scale * np.sqrt(squared))
    return total


def band_covariance(params, grid, band):
    """Covariance of one layer on the grid of torus offsets."""
    if band.is_white(grid):
        cov = np.zeros(grid.shape)
        cov[(0,) * grid.dim] = band.variance
        return cov
    return band.variance * periodized_kernel(params.seed, grid, math.exp(band.u_center))


def band_covariance_grid(params, grid, t, delta_u):
    """Covariance of the truncated field X_t as realized by the band discretization."""
    cov = np.zeros(grid.shape)
    for band in band_layout(params, t, delta_u):
        cov += band_covariance(params, grid, band)
    return cov


def realized_variance(params, t, delta_u):
    """Midpoint-rule variance sum_j w_j du, the exact per-site variance of the sampled X_t."""
    return float(sum(band.variance for band in band_layout(params, t, delta_u)))
