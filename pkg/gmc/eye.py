"""
The eye domain of complex inverse temperatures: the open convex hull of the
interval (-sqrt(2d), sqrt(2d)) and the disc of radius sqrt(d), equivalently
the union of the discs |gamma' - gamma| < sqrt(d) - |gamma|/sqrt(2) over real
gamma in the interval.
"""

import math
from dataclasses import dataclass

import numpy as np

from gmc_lab.exceptions import ParameterError

DISC_SCAN_CHUNK = 256


def _check_dim(d):
    if d not in (1, 2):
        raise ParameterError(f"dimension must be 1 or 2, got {d}")


def disc_radius(gamma, d):
    _check_dim(d)
    gamma = float(gamma)
    if abs(gamma) >= math.sqrt(2 * d):
        raise ParameterError(f"|gamma|={abs(gamma)} is not below sqrt(2d)={math.sqrt(2 * d):.6f}")
    return math.sqrt(d) - abs(gamma) / math.sqrt(2)


def eye_contains(point, d):
    """Membership in the eye; vectorized over ``point``."""
    _check_dim(d)
    point = np.asarray(point, dtype=complex)
    re, im = np.abs(point.real), np.abs(point.imag)
    in_disc = np.abs(point) < math.sqrt(d)
    in_wedge = (im < re) & (re + im < math.sqrt(2 * d))
    result = in_disc | in_wedge
    return bool(result) if result.ndim == 0 else result


def eye_contains_by_discs(point, d, n_centers=10001):
    """Membership by scanning the union of discs over n_centers interior centres."""
    _check_dim(d)
    half_width = math.sqrt(2 * d)
    centers = np.linspace(-half_width, half_width, n_centers + 2)[1:-1]
    radii = math.sqrt(d) - np.abs(centers) / math.sqrt(2)
    point = np.asarray(point, dtype=complex)
    flat = point.reshape(-1)
    result = np.empty(flat.shape, dtype=bool)
    for start in range(0, flat.size, DISC_SCAN_CHUNK):
        chunk = flat[start:start + DISC_SCAN_CHUNK, None]
        result[start:start + DISC_SCAN_CHUNK] = np.any(np.abs(chunk - centers) < radii, axis=1)
    result = result.reshape(point.shape)
    return bool(result) if result.ndim == 0 else result


def boundary_distance(point, d):
    """Distance to the nearest of the curves bounding the eye's pieces (a lower bound)."""
    point = np.asarray(point, dtype=complex)
    re, im = np.abs(point.real), np.abs(point.imag)
    return np.minimum.reduce([
        np.abs(np.abs(point) - math.sqrt(d)),
        np.abs(re - im) / math.sqrt(2),
        np.abs(re + im - math.sqrt(2 * d)) / math.sqrt(2),
    ])


@dataclass(frozen=True)
class EyeDomain:
    dim: int

    def __post_init__(self):
        _check_dim(self.dim)

    @property
    def interval_half_width(self):
        return math.sqrt(2 * self.dim)

    @property
    def disc_half_width(self):
        return math.sqrt(self.dim)

    def __contains__(self, point):
        return eye_contains(point, self.dim)

    def disc_radius(self, gamma):
        return disc_radius(gamma, self.dim)

    def in_l2_phase(self, gamma_prime):
        """|gamma'| < sqrt(d): the region where second moments stay bounded."""
        return abs(complex(gamma_prime)) < self.disc_half_width
