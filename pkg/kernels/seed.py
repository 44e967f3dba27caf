"""
Seed covariance and mollifier.

The seed profile is the standard bump c exp(-1/(1 - (2r)^2)) on r < 1/2,
L2-normalized, and the seed kernel is its autocorrelation, supported in the
unit ball with K(0) = 1. The mollifier is the same bump on the unit ball
normalized to unit mass.
"""

import math
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from django.conf import settings
from scipy import fft, integrate
from scipy.interpolate import CubicSpline

from gmc_lab.exceptions import KernelConstructionError, ParameterError

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 256
SUPPORTED_DIMS = (1, 2)
SPECTRAL_WARN = -1e-8
SPECTRAL_FAIL = -1e-6

_GL_LINE = np.polynomial.legendre.leggauss(256)
_GL_RADIAL = np.polynomial.legendre.leggauss(128)
_THETA_INTERVALS = 256
_DIAGNOSTIC_POINTS_2D = 128


def unit_sphere_area(dim):
    return 2.0 * math.pi ** (dim / 2) / math.gamma(dim / 2)


def bump(s):
    """exp(-1/(1 - s^2)) for |s| < 1, zero elsewhere."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _radial_integral(profile, upper, dim):
    value, _ = integrate.quad(lambda r: profile(r) * r ** (dim - 1), 0.0, upper, epsabs=1e-14, epsrel=1e-13, limit=200)
    return unit_sphere_area(dim) * value


def _check_build_args(dim, resolution):
    if dim not in SUPPORTED_DIMS:
        raise ParameterError(f"dimension must be one of {SUPPORTED_DIMS}, got {dim}")
    if resolution < MIN_RESOLUTION:
        raise ParameterError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")


class _SeedProfile:
    """phi_seed, normalized so that its L2 norm in dimension ``dim`` is one."""

    def __init__(self, dim):
        mass = _radial_integral(lambda r: float(bump(2.0 * r)) ** 2, 0.5, dim)
        self.scale = 1.0 / math.sqrt(mass)

    def __call__(self, r):
        return self.scale * bump(2.0 * np.abs(r))


def _autocorrelation_line(radii, phi):
    x, w = _GL_LINE
    radii = np.asarray(radii, dtype=float)
    out = np.zeros_like(radii)
    overlap = radii < 1.0
    r = radii[overlap][:, None]
    # overlap of the two supports is [r - 1/2, 1/2]
    half = (1.0 - r) / 2.0
    y = r / 2.0 + half * x[None, :]
    out[overlap] = (phi(y) * phi(y - r) * w[None, :]).sum(axis=1) * half[:, 0]
    return out


def _autocorrelation_plane(radii, phi, chunk=32):
    """2 int_0^{1/2} rho phi(rho) int_0^pi phi(|r e_1 - rho e_theta|) dtheta drho."""
    x, w = _GL_RADIAL
    rho = 0.25 * (x + 1.0)
    rho_w = 0.25 * w * rho * phi(rho)
    theta = np.linspace(0.0, math.pi, _THETA_INTERVALS + 1)
    theta_w = np.full(theta.shape, math.pi / _THETA_INTERVALS)
    theta_w[[0, -1]] *= 0.5
    cos_theta = np.cos(theta)
    radii = np.asarray(radii, dtype=float)
    out = np.zeros_like(radii)
    for start in range(0, radii.size, chunk):
        r = radii[start:start + chunk][:, None, None]
        dist_sq = r * r + rho[None, :, None] ** 2 - 2.0 * r * rho[None, :, None] * cos_theta[None, None, :]
        inner = (phi(np.sqrt(np.maximum(dist_sq, 0.0))) * theta_w).sum(axis=2)
        out[start:start + chunk] = 2.0 * (inner * rho_w).sum(axis=1)
    out[radii >= 1.0] = 0.0
    return out


def _autocorrelation(radii, phi, dim):
    if dim == 1:
        return _autocorrelation_line(radii, phi)
    return _autocorrelation_plane(radii, phi)


def _line_spectrum(table, resolution):
    # even extension of the table on [-2, 2) with spacing 1/resolution
    samples = np.zeros(4 * resolution)
    samples[:resolution + 1] = table
    samples[3 * resolution:] = table[resolution:0:-1]
    spectrum = fft.rfft(samples).real
    freqs = fft.rfftfreq(samples.size, d=1.0 / resolution)
    return spectrum, freqs, spectrum


def _plane_spectrum(phi):
    n = _DIAGNOSTIC_POINTS_2D
    h = 4.0 / n
    offsets = fft.fftfreq(n, d=1.0 / n) * h
    radius = np.hypot(offsets[:, None], offsets[None, :])
    unique, inverse = np.unique(radius, return_inverse=True)
    values = _autocorrelation(unique, phi, 2)
    values = values / values[0]
    samples = values[inverse].reshape(radius.shape)
    spectrum = fft.rfftn(samples).real
    freqs = fft.fftfreq(n, d=h)[: n // 2]
    return spectrum, freqs, spectrum[: n // 2, 0]


@dataclass(frozen=True, eq=False)
class SeedKernel:
    radial_table: np.ndarray
    resolution: int
    dim: int
    spectral_min: float
    spectrum_freqs: np.ndarray = field(repr=False, compare=False)
    spectrum_profile: np.ndarray = field(repr=False, compare=False)
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        radii = np.linspace(0.0, 1.0, self.resolution + 1)
        object.__setattr__(self, '_spline', CubicSpline(radii, self.radial_table, bc_type='clamped'))

    @property
    def radii(self):
        return np.linspace(0.0, 1.0, self.resolution + 1)

    def value(self, r):
        """K(|r|), clamped cubic interpolation of the table; exactly zero for |r| >= 1."""
        r = np.abs(np.asarray(r, dtype=float))
        out = np.clip(self._spline(np.minimum(r, 1.0)), 0.0, None)
        out = np.where(r >= 1.0, 0.0, out)
        return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=8)
def build_seed(dim, resolution):
    _check_build_args(dim, resolution)
    phi = _SeedProfile(dim)
    radii = np.linspace(0.0, 1.0, resolution + 1)
    table = _autocorrelation(radii, phi, dim)
    table = np.clip(table / table[0], 0.0, None)
    table[0] = 1.0
    table[-1] = 0.0
    table.setflags(write=False)

    if dim == 1:
        spectrum, freqs, profile = _line_spectrum(table, resolution)
    else:
        spectrum, freqs, profile = _plane_spectrum(phi)
    peak = spectrum.max()
    spectral_min = float(spectrum.min() / peak)
    if spectral_min < SPECTRAL_FAIL:
        raise KernelConstructionError(
            f"seed kernel spectrum dips to {spectral_min:.3e} (d={dim}, resolution={resolution})"
        )
    if spectral_min < SPECTRAL_WARN:
        logger.warning("seed kernel spectral minimum %.3e below %.0e", spectral_min, SPECTRAL_WARN)
    logger.debug("built seed kernel d=%d resolution=%d spectral_min=%.3e", dim, resolution, spectral_min)
    return SeedKernel(
        radial_table=table,
        resolution=resolution,
        dim=dim,
        spectral_min=spectral_min,
        spectrum_freqs=freqs,
        spectrum_profile=profile / peak,
    )


def default_seed(dim):
    return build_seed(dim, settings.GMC_LAB_SEED_RESOLUTION)


def spectral_decay_slope(seed, low=1.0, high=10.0):
    """Least-squares slope of log K^ against log |xi| over [low, high] cycles per unit.

    The fit runs on the nonincreasing upper envelope of the spectrum, which
    removes the dips at zeros of the profile's transform.
    """
    envelope = np.maximum.accumulate(seed.spectrum_profile[::-1])[::-1]
    mask = (seed.spectrum_freqs >= low) & (seed.spectrum_freqs <= high)
    if mask.sum() < 2:
        raise ParameterError(f"fewer than two frequencies in [{low}, {high}]")
    logs = np.log(np.maximum(envelope[mask], 1e-300))
    slope, _ = np.polyfit(np.log(seed.spectrum_freqs[mask]), logs, 1)
    return float(slope)


@dataclass(frozen=True)
class ScaledMollifier:
    """phi_eps(x) = eps^{-d} phi(x / eps)."""
    base: 'Mollifier'
    epsilon: float

    def value(self, r):
        return self.epsilon ** (-self.base.dim) * self.base.value(np.asarray(r) / self.epsilon)


@dataclass(frozen=True, eq=False)
class Mollifier:
    profile_table: np.ndarray
    dim: int
    scale: float

    @property
    def resolution(self):
        return self.profile_table.size - 1

    def value(self, r):
        out = self.scale * bump(np.abs(np.asarray(r, dtype=float)))
        return float(out) if out.ndim == 0 else out

    def rescaled(self, eps):
        if not eps > 0:
            raise ParameterError(f"mollifier scale must be positive, got {eps}")
        return ScaledMollifier(base=self, epsilon=eps)


@lru_cache(maxsize=8)
def build_mollifier(dim, resolution):
    _check_build_args(dim, resolution)
    mass = _radial_integral(lambda r: float(bump(r)), 1.0, dim)
    scale = 1.0 / mass
    table = scale * bump(np.linspace(0.0, 1.0, resolution + 1))
    table.setflags(write=False)
    return Mollifier(profile_table=table, dim=dim, scale=scale)


def default_mollifier(dim):
    return build_mollifier(dim, settings.GMC_LAB_SEED_RESOLUTION)


@dataclass(frozen=True)
class FieldParams:
    dim: int
    alpha: float
    frak_a: float
    seed: SeedKernel

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.frak_a <= 1.0:
            raise ParameterError(f"frak_a must lie in [0, 1], got {self.frak_a}")
        if self.dim != self.seed.dim:
            raise ParameterError(f"field dimension {self.dim} does not match seed dimension {self.seed.dim}")

    def with_frak_a(self, frak_a):
        return replace(self, frak_a=frak_a)

    def band_weight(self, u):
        return 1.0 - self.frak_a * np.exp(-self.alpha * np.asarray(u, dtype=float))
