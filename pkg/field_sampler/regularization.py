"""
Regularizations of a sampled field and their exact-in-discretization covariances.

    Truncated(t)              X_t
    Mollified(eps)            X_{t_max} * phi_eps
    TruncatedMollified(t, eps) X_t * phi_eps

Mollification is a periodic convolution with the grid weights of phi_eps,
renormalized to unit mass, evaluated in Fourier space.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft

from gmc_lab.exceptions import ParameterError
from field_sampler.bands import band_covariance_grid, realized_variance
from kernels.seed import default_mollifier

MIN_SPACINGS = 4
MAX_EPSILON = 0.5
TAIL_MARGIN = 4.0


@dataclass(frozen=True)
class Truncated:
    t: float

    def depth(self, t_max):
        return self.t

    @property
    def epsilon(self):
        return None


@dataclass(frozen=True)
class Mollified:
    eps: float

    def depth(self, t_max):
        return t_max

    @property
    def epsilon(self):
        return self.eps


@dataclass(frozen=True)
class TruncatedMollified:
    t: float
    eps: float

    def depth(self, t_max):
        return self.t

    @property
    def epsilon(self):
        return self.eps


def check_epsilon(grid, eps):
    if not eps <= MAX_EPSILON:
        raise ParameterError(f"epsilon must be at most {MAX_EPSILON}, got {eps}")
    if eps < MIN_SPACINGS * grid.spacing * (1.0 - 1e-12):
        raise ParameterError(
            f"epsilon {eps:.4g} is below {MIN_SPACINGS} grid spacings of {grid}"
        )


@lru_cache(maxsize=64)
def mollifier_spectrum(grid, eps):
    """rfftn of the unit-mass grid weights of phi_eps."""
    check_epsilon(grid, eps)
    weights = default_mollifier(grid.dim).rescaled(eps).value(grid.offset_distance)
    weights = weights / weights.sum()
    spectrum = fft.rfftn(weights)
    spectrum.setflags(write=False)
    return spectrum


def mollify(values, grid, eps):
    grid.check_field(values)
    return fft.irfftn(fft.rfftn(values) * mollifier_spectrum(grid, eps), s=grid.shape)


def field_at(sample, reg):
    """Grid values of the regularized field selected by ``reg``."""
    truncated = sample.truncated(reg.depth(sample.t_max))
    if reg.epsilon is None:
        return truncated
    return mollify(truncated, sample.grid, reg.epsilon)


def mollified_covariance_grid(params, grid, t, delta_u, eps1=None, eps2=None):
    """
    Cov(X_{t,eps1}(0), X_{t,eps2}(x)) over the torus offsets x.

    ``None`` leaves the corresponding side unmollified. Mixed truncation
    depths reduce to the smaller depth, since the layers are shared.
    """
    spectrum = fft.rfftn(band_covariance_grid(params, grid, t, delta_u))
    if eps1 is not None:
        spectrum = spectrum * np.conj(mollifier_spectrum(grid, eps1))
    if eps2 is not None:
        spectrum = spectrum * mollifier_spectrum(grid, eps2)
    return fft.irfftn(spectrum, s=grid.shape)


def regularized_covariance_grid(params, grid, t_max, delta_u, first, second=None):
    """Covariance grid between two regularizations of the same sample."""
    second = first if second is None else second
    depth = min(first.depth(t_max), second.depth(t_max))
    return mollified_covariance_grid(params, grid, depth, delta_u, first.epsilon, second.epsilon)


def regularized_variance(params, grid, t_max, delta_u, reg):
    """Per-site variance of the regularized sampled field (the sigma^2 of its Wick ordering)."""
    if reg.epsilon is None:
        return realized_variance(params, reg.depth(t_max), delta_u)
    cov = regularized_covariance_grid(params, grid, t_max, delta_u, reg)
    return float(cov[(0,) * grid.dim])


def tail_variance_bound(t_max, eps):
    """Bound e^{-(t_max - log(1/eps))} on the variance left out when mollifying X_{t_max}."""
    return math.exp(-(t_max - math.log(1.0 / eps)))


def check_tail_margin(t_max, eps):
    """Mollified(eps) of X_{t_max} needs t_max >= log(1/eps) + TAIL_MARGIN."""
    needed = math.log(1.0 / eps) + TAIL_MARGIN
    if t_max < needed - 1e-9:
        raise ParameterError(f"t_max={t_max} is below log(1/eps) + {TAIL_MARGIN:g} = {needed:.6g} for eps={eps:.6g}")
