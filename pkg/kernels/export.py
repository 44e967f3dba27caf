import csv

import numpy as np

SIGNIFICANT_DIGITS = 12


def format_float(value):
    return f"{float(value):.{SIGNIFICANT_DIGITS}g}"


def write_radial_csv(stream, radii, values):
    """Write a two-column (r, value) table."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['r', 'value'])
    for r, v in zip(np.ravel(radii), np.ravel(values)):
        writer.writerow([format_float(r), format_float(v)])
    return len(np.ravel(radii))


def seed_rows(seed):
    return seed.radii, seed.radial_table


def mollifier_rows(mollifier):
    return np.linspace(0.0, 1.0, mollifier.resolution + 1), mollifier.profile_table
