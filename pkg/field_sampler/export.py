"""
Field snapshots.

Binary layout: a little-endian header (dim int64, M int64, t_max float64,
seed uint64) followed by the M^d field values as row-major float64.
"""

import csv

import numpy as np

from gmc_lab.exceptions import ParameterError
from field_sampler.streams import SEED_MASK
from kernels.export import format_float

HEADER_DTYPE = np.dtype([('dim', '<i8'), ('points', '<i8'), ('t_max', '<f8'), ('seed', '<u8')])
CSV_MAX_SITES = 1 << 16


def write_binary(stream, values, t_max, seed):
    values = np.ascontiguousarray(values, dtype='<f8')
    header = np.array([(values.ndim, values.shape[0], t_max, int(seed) & SEED_MASK)], dtype=HEADER_DTYPE)
    stream.write(header.tobytes())
    stream.write(values.tobytes(order='C'))


def read_binary(stream):
    raw = stream.read()
    header = np.frombuffer(raw[:HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    dim, points = int(header['dim']), int(header['points'])
    values = np.frombuffer(raw[HEADER_DTYPE.itemsize:], dtype='<f8')
    if values.size != points ** dim:
        raise ParameterError(f"payload has {values.size} values, header promises {points}^{dim}")
    meta = {'dim': dim, 'points': points, 't_max': float(header['t_max']), 'seed': int(header['seed'])}
    return meta, values.reshape((points,) * dim)


def write_csv(stream, values):
    """Columns x[, y], value with site coordinates on the unit torus."""
    values = np.asarray(values, dtype=float)
    if values.size > CSV_MAX_SITES:
        raise ParameterError(f"CSV export is limited to {CSV_MAX_SITES} sites, got {values.size}")
    axes = ['x', 'y'][: values.ndim]
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(axes + ['value'])
    points = values.shape[0]
    for index in np.ndindex(values.shape):
        writer.writerow([format_float(i / points) for i in index] + [format_float(values[index])])
    return values.size
