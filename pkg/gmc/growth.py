import csv
import math
import logging
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial

from gmc_lab.exceptions import ParameterError
from gmc.estimators import wick_power_sequence
from kernels.export import format_float

logger = logging.getLogger(__name__)

MAX_ORDER = 12
GROWTH_COLUMNS = ('epsilon', 'k', 'mean_abs', 'se', 'normalized')


class GrowthRow(NamedTuple):
    epsilon: float
    k: int
    mean_abs: float
    std_error: float
    normalized: float


def growth_rate(gamma, d, eta):
    """(1 + eta) sqrt(2) / (sqrt(2d) - |gamma|)."""
    gap = math.sqrt(2 * d) - abs(gamma)
    if gap <= 0:
        raise ParameterError(f"|gamma|={abs(gamma)} must be below sqrt(2d)={math.sqrt(2 * d):.6f}")
    return (1.0 + eta) * math.sqrt(2.0) / gap


def coefficient_growth_report(f, replicas, gamma, k_max, eta):
    """
    Normalized Monte Carlo L1 norms E|I_eps(f, k)| / (k! rate^k) for k = 0..k_max.

    ``replicas`` maps each epsilon to ``(fields, sigma_eps)`` where ``fields``
    stacks the regularized replicas along the leading axis.
    """
    if not 0 <= k_max <= MAX_ORDER:
        raise ParameterError(f"k_max must lie in [0, {MAX_ORDER}], got {k_max}")
    if not eta > 0:
        raise ParameterError(f"eta must be positive, got {eta}")
    rate = growth_rate(gamma, f.grid.dim, eta)
    rows = []
    for epsilon in sorted(replicas, reverse=True):
        fields, sigma_eps = replicas[epsilon]
        site_axes = tuple(range(1, f.grid.dim + 1))
        magnitudes = np.array([
            np.abs(np.mean(f.values * wick_power_sequence(field, k_max, gamma, sigma_eps), axis=site_axes))
            for field in fields
        ])
        means = magnitudes.mean(axis=0)
        errors = magnitudes.std(axis=0, ddof=1) / math.sqrt(len(fields))
        for k in range(k_max + 1):
            norm = math.factorial(k) * rate ** k
            rows.append(GrowthRow(float(epsilon), k, float(means[k]), float(errors[k]), float(means[k] / norm)))
        logger.debug("growth table row for eps=%.4g from %d replicas", epsilon, len(fields))
    return rows


def growth_slope(rows, epsilon):
    """Least-squares slope of log(normalized) against k at one epsilon."""
    selected = [row for row in rows if row.epsilon == epsilon and row.normalized > 0]
    if len(selected) < 2:
        raise ParameterError(f"need at least two positive rows at eps={epsilon}")
    ks = np.array([row.k for row in selected], dtype=float)
    logs = np.log([row.normalized for row in selected])
    return float(polynomial.polyfit(ks, logs, 1)[1])


def write_growth_csv(stream, rows):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(GROWTH_COLUMNS)
    for row in rows:
        writer.writerow([
            format_float(row.epsilon), row.k, format_float(row.mean_abs),
            format_float(row.std_error), format_float(row.normalized),
        ])
    return len(rows)
