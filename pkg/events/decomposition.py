"""
First-failure scales and the good/bad split of the GMC estimator.

A site x fails at scale n when X_n(x_n) > gamma_hat n. The good event holds
when no scale in [n0, N] fails; otherwise the first failing scale labels the
site, so the labels {good, n0, ..., N} partition the grid.
"""

import math
import logging
from typing import NamedTuple

import numpy as np

from gmc_lab.exceptions import ParameterError
from field_sampler.bands import realized_variance
from events.export import BadMassRow
from events.lattice import ScaleLattice, cell_rep
from gmc.estimators import wick_field_grid

logger = logging.getLogger(__name__)

GOOD = -1


def _check_depth(sample, cfg):
    if sample.t_max < cfg.N:
        raise ParameterError(f"sample depth {sample.t_max} is below the finest scale index N={cfg.N}")


def first_failure_map(sample, cfg):
    """First failing scale index at every grid site, GOOD (-1) where the good event holds."""
    _check_depth(sample, cfg)
    grid = sample.grid
    labels = np.full(grid.shape, GOOD, dtype=np.int64)
    for n in cfg.scales:
        field = sample.truncated(n)
        at_reps = field[ScaleLattice(n, grid.dim).representative_sites(grid)]
        fails = (at_reps > cfg.gamma_hat * n) & (labels == GOOD)
        labels[fails] = n
    logger.debug("good event holds at %d of %d sites", int(np.sum(labels == GOOD)), grid.size)
    return labels


def first_failure_scale(sample, x, cfg):
    """Smallest n in [n0, N] with X_n(x_n) > gamma_hat n, or None."""
    _check_depth(sample, cfg)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    for n in cfg.scales:
        site = sample.grid.site_index(cell_rep(x, n))
        if sample.truncated(n)[site] > cfg.gamma_hat * n:
            return n
    return None


def partition_counts(labels, cfg):
    """Indicator sums of G and of every F_n at each site; all ones for an exact partition."""
    total = (labels == GOOD).astype(np.int64)
    for n in cfg.scales:
        total += labels == n
    return total


class GoodBadSplit(NamedTuple):
    good: complex
    bad: complex
    total: complex


def split_good_bad(f, sample, k, gamma, cfg, field=None, sigma_eps=None):
    """
    I(f, k) split over the good and bad sites, on the field X_N by default.

    ``field`` and ``sigma_eps`` select another regularization of the same
    sample; the labels always come from the truncated field.
    """
    if field is None:
        field = sample.truncated(cfg.N)
        sigma_eps = math.sqrt(realized_variance(sample.params, cfg.N, sample.delta_u))
    elif sigma_eps is None:
        raise ParameterError("sigma_eps is required with an explicit field")
    f.grid.check_same(sample.grid)
    f.grid.check_field(field)
    good = first_failure_map(sample, cfg) == GOOD
    integrand = f.values * wick_field_grid(field, k, gamma, sigma_eps)
    size = sample.grid.size
    good_value = complex(np.sum(np.where(good, integrand, 0.0)) / size)
    bad_value = complex(np.sum(np.where(good, 0.0, integrand)) / size)
    # total is the sum of the two parts, bit for bit
    return GoodBadSplit(good=good_value, bad=bad_value, total=good_value + bad_value)


def bad_mass_row(magnitudes, k, gamma, cfg):
    """Mean |I_bad| over replicas with its standard error, as a bad-mass table row."""
    magnitudes = np.asarray(magnitudes, dtype=float)
    if magnitudes.size < 2:
        raise ParameterError(f"bad mass needs at least two samples, got {magnitudes.size}")
    return BadMassRow(
        delta=cfg.delta,
        epsilon=cfg.epsilon,
        k=int(k),
        gamma=float(gamma),
        gamma_hat=float(cfg.gamma_hat),
        mean_abs_bad=float(magnitudes.mean()),
        se=float(magnitudes.std(ddof=1) / math.sqrt(magnitudes.size)),
        n_replicas=int(magnitudes.size),
    )
