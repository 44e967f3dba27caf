import math
from typing import NamedTuple

import numpy as np

from gmc_lab.exceptions import ParameterError
from field_sampler.bands import band_count
from kernels.covariance import cov_star

MIN_REPLICAS = 100


class CovEstimate(NamedTuple):
    estimate: float
    std_error: float


def _stack(replicas):
    values = np.asarray(replicas, dtype=float)
    if values.ndim < 2 or values.shape[0] < MIN_REPLICAS:
        raise ParameterError(f"at least {MIN_REPLICAS} replicas required, got {len(replicas)}")
    return values


def _site(values, site):
    index = (slice(None),) + (tuple(site) if np.ndim(site) else (int(site),))
    return values[index]


def jackknife_covariance(a, b):
    """Unbiased covariance of paired samples with its leave-one-out jackknife error."""
    n = a.size
    sum_a, sum_b, sum_ab = a.sum(), b.sum(), np.dot(a, b)
    estimate = (sum_ab - sum_a * sum_b / n) / (n - 1)
    # covariance with replica i left out, for every i at once
    rest_a, rest_b = sum_a - a, sum_b - b
    leave_one_out = (sum_ab - a * b - rest_a * rest_b / (n - 1)) / (n - 2)
    spread = leave_one_out - leave_one_out.mean()
    std_error = math.sqrt((n - 1) / n * float(np.dot(spread, spread)))
    return CovEstimate(estimate=float(estimate), std_error=std_error)


def empirical_cov(replicas, pairs):
    """
    Covariance estimates between grid sites across replicas.

    ``replicas`` stacks the fields along the leading axis; each pair holds two
    site indices (ints in d = 1, tuples in d = 2).
    """
    values = _stack(replicas)
    return [jackknife_covariance(_site(values, x), _site(values, y)) for x, y in pairs]


def cross_layer_cov(samples, first, second, site):
    """Covariance between two stored layers at one site, across samples."""
    a = np.array([sample.layers[(first,) + tuple(site)] for sample in samples])
    b = np.array([sample.layers[(second,) + tuple(site)] for sample in samples])
    if a.size < MIN_REPLICAS:
        raise ParameterError(f"at least {MIN_REPLICAS} samples required, got {a.size}")
    return jackknife_covariance(a, b)


def moment_check(values):
    """Skewness and excess kurtosis of a sample with their large-sample standard errors."""
    values = np.asarray(values, dtype=float)
    n = values.size
    centred = values - values.mean()
    var = np.mean(centred ** 2)
    skew = float(np.mean(centred ** 3) / var ** 1.5)
    kurt = float(np.mean(centred ** 4) / var ** 2 - 3.0)
    return skew, math.sqrt(6.0 / n), kurt, math.sqrt(24.0 / n)


def _separation(pair):
    x, y = (np.atleast_1d(np.asarray(p, dtype=float)) for p in pair)
    return float(np.linalg.norm(x - y))


def scaling_check(params, r0, t, pairs, delta_u=0.25):
    """
    Largest defect of the scaling identity

        C^a_t(r0 x, r0 y) = C^{a r0^alpha}_{t-t0}(x, y) + C^a_{t0}(r0 x, r0 y),  r0 = e^{-t0},

    over the given point pairs, with every covariance by quadrature.
    """
    t0 = math.log(1.0 / r0)
    band_count(t0, delta_u)
    if t < t0:
        raise ParameterError(f"t={t} must be at least t0={t0}")
    rescaled = params.with_frak_a(params.frak_a * r0 ** params.alpha)
    defect = 0.0
    for pair in pairs:
        s = _separation(pair)
        lhs = cov_star(params, t, t, r0 * s)
        rhs = cov_star(rescaled, t - t0, t - t0, s) + cov_star(params, t0, t0, r0 * s)
        defect = max(defect, abs(lhs - rhs))
    return defect
