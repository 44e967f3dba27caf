import math

import numpy as np

from gmc_lab.exceptions import ParameterError


def thickness_max(sample, t):
    """max_x X_t(x) / t over the grid sites."""
    if not t > 0:
        raise ParameterError(f"thickness depth must be positive, got {t}")
    return float(np.max(sample.truncated(t))) / t


def thickness_profile(sample, depths):
    return [thickness_max(sample, t) for t in depths]


def critical_thickness(d):
    """sqrt(2d), the almost sure limit of the thickness ratio."""
    return math.sqrt(2 * d)
