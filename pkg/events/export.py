import csv
from typing import NamedTuple

import numpy as np

from kernels.export import format_float

BAD_MASS_COLUMNS = ('delta', 'epsilon', 'k', 'gamma', 'gamma_hat', 'mean_abs_bad', 'se', 'n_replicas')


class BadMassRow(NamedTuple):
    delta: float
    epsilon: float
    k: int
    gamma: float
    gamma_hat: float
    mean_abs_bad: float
    se: float
    n_replicas: int


def write_bad_mass_csv(stream, rows):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(BAD_MASS_COLUMNS)
    for row in rows:
        writer.writerow([
            value if isinstance(value, int) else format_float(value) for value in row
        ])
    return len(rows)


THICKNESS_COLUMNS = ('t', 'median', 'lower_quartile', 'upper_quartile', 'n_replicas')


def write_thickness_csv(stream, depths, profiles):
    """One row per depth summarizing ``profiles`` (replicas x depths) by its quartiles."""
    profiles = np.asarray(profiles, dtype=float)
    lower, median, upper = np.percentile(profiles, [25, 50, 75], axis=0)
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(THICKNESS_COLUMNS)
    for j, t in enumerate(depths):
        writer.writerow([
            format_float(t), format_float(median[j]), format_float(lower[j]),
            format_float(upper[j]), profiles.shape[0],
        ])
    return len(depths)
