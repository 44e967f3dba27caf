"""Replica orchestration: replica i always draws from split_seed(base_seed, i)."""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from gmc_lab.exceptions import ParameterError
from field_sampler.streams import split_seed

logger = logging.getLogger(__name__)


class ReplicaMean(NamedTuple):
    estimate: float
    std_error: float


def map_replicas(func, base_seed, count, threads=1):
    """``[func(split_seed(base_seed, i)) for i in range(count)]``, optionally on a thread pool."""
    if count < 1:
        raise ParameterError(f"replica count must be positive, got {count}")
    seeds = [split_seed(base_seed, i) for i in range(count)]
    if threads <= 1:
        return [func(seed) for seed in seeds]
    logger.debug("running %d replicas on %d threads", count, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map yields in submission order, so aggregates see replicas by index
        return list(pool.map(func, seeds))


def replica_mean(values):
    """Mean with its standard error; numpy's pairwise summation keeps the drift bounded."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] < 2:
        raise ParameterError(f"need at least two replicas, got {values.shape[0]}")
    mean = values.mean(axis=0)
    error = values.std(axis=0, ddof=1) / math.sqrt(values.shape[0])
    if np.ndim(mean) == 0:
        return ReplicaMean(float(mean), float(error))
    return ReplicaMean(mean, error)
