"""
Covariances of the almost star-scale invariant field.

    C_{s,t}(r) = int_0^{min(s,t)} K(e^u r) (1 - a e^{-alpha u}) du

with the variance sigma_t^2 = C_{t,t}(0) in closed form.
"""

import math
import logging

import numpy as np
from scipy import integrate

from gmc_lab.exceptions import ParameterError

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-11
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 500
# frozen once from a sweep over a in {0, 0.5, 1}, alpha in {1, 2}, r in e^{-2..-9}
LOG_GAP_BOUND = 3.5


def sigma_sq(params, t):
    """t - a (1 - e^{-alpha t}) / alpha."""
    if t < 0:
        raise ParameterError(f"depth must be nonnegative, got {t}")
    if math.isinf(t):
        return math.inf
    return t + params.frak_a * math.expm1(-params.alpha * t) / params.alpha


def cov_star(params, s, t, r):
    """C_{s,t} at separation ``r``; ``s`` and ``t`` may be ``math.inf``."""
    if r < 0:
        raise ParameterError(f"separation must be nonnegative, got {r}")
    if s < 0 or t < 0:
        raise ParameterError(f"depths must be nonnegative, got s={s}, t={t}")
    upper = min(s, t)
    if r == 0:
        return sigma_sq(params, upper)
    # K(e^u r) vanishes once e^u r >= 1
    upper = min(upper, math.log(1.0 / r))
    if upper <= 0:
        return 0.0

    def integrand(u):
        return params.seed.value(math.exp(u) * r) * (1.0 - params.frak_a * math.exp(-params.alpha * u))

    value, error = integrate.quad(integrand, 0.0, upper, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    logger.debug("cov_star r=%.3e upper=%.4f value=%.12g error=%.1e", r, upper, value, error)
    return value


def cov_star_profile(params, s, t, radii):
    return np.array([cov_star(params, s, t, float(r)) for r in np.ravel(radii)]).reshape(np.shape(radii))


def log_asymptotic_gap(params, r):
    """|C_{inf,inf}(r) - log(1/r)|, bounded uniformly in small r."""
    return abs(cov_star(params, math.inf, math.inf, r) - math.log(1.0 / r))
