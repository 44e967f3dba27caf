"""
One-dimensional Brownian toy model of the barrier argument:

    T^{k/2} E[H_k(B_T / sqrt(T)) 1{B_t <= t for t = 0..T}]

and the martingale property of t^{k/2} H_k(B_t / sqrt(t)).
"""

import math
import logging
from typing import NamedTuple

import numpy as np

from gmc_lab.exceptions import ParameterError
from field_sampler.statistics import CovEstimate, jackknife_covariance
from field_sampler.streams import make_generator
from hermite_wick.polynomials import hermite_eval

logger = logging.getLogger(__name__)

MIN_REPLICAS = 10_000


class MonteCarloMean(NamedTuple):
    estimate: float
    std_error: float


class MartingaleCheck(NamedTuple):
    first: MonteCarloMean
    second: MonteCarloMean
    increment_cov: CovEstimate


def _mean(values):
    return MonteCarloMean(float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size)))


def _check(k, replicas):
    if int(k) != k or k < 0:
        raise ParameterError(f"Hermite order must be a nonnegative integer, got {k}")
    if replicas < MIN_REPLICAS:
        raise ParameterError(f"at least {MIN_REPLICAS} replicas required, got {replicas}")


def scaled_hermite(k, b, t):
    """t^{k/2} H_k(b / sqrt(t))."""
    return t ** (k / 2) * hermite_eval(k, b / math.sqrt(t))


def toy_martingale_stat(k, T, replicas, seed):
    """Monte Carlo estimate and standard error of T^{k/2} E[H_k(B_T/sqrt(T)) 1{B_t <= t, t = 0..T}]."""
    _check(k, replicas)
    if int(T) != T or T < 1:
        raise ParameterError(f"T must be a positive integer, got {T}")
    rng = make_generator(seed)
    paths = np.cumsum(rng.standard_normal((replicas, int(T))), axis=1)
    # B_0 = 0 <= 0 always holds
    barrier = np.all(paths <= np.arange(1, int(T) + 1), axis=1)
    values = np.where(barrier, scaled_hermite(k, paths[:, -1], T), 0.0)
    logger.debug("barrier survived in %d of %d paths (T=%d)", int(barrier.sum()), replicas, T)
    return _mean(values)


def hermite_martingale_check(k, t1, t2, replicas, seed):
    """
    Means of M_t = t^{k/2} H_k(B_t/sqrt(t)) at t1 < t2 and the covariance of
    the increment M_{t2} - M_{t1} with H_k(B_{t1}/sqrt(t1)).
    """
    _check(k, replicas)
    if not 0 < t1 < t2:
        raise ParameterError(f"times must satisfy 0 < t1 < t2, got t1={t1}, t2={t2}")
    rng = make_generator(seed)
    b1 = math.sqrt(t1) * rng.standard_normal(replicas)
    b2 = b1 + math.sqrt(t2 - t1) * rng.standard_normal(replicas)
    m1, m2 = scaled_hermite(k, b1, t1), scaled_hermite(k, b2, t2)
    return MartingaleCheck(
        first=_mean(m1),
        second=_mean(m2),
        increment_cov=jackknife_covariance(m2 - m1, hermite_eval(k, b1 / math.sqrt(t1))),
    )
