"""
Spectral synthesis of the layered field on the torus.

Every band is a stationary Gaussian layer whose circulant covariance is
diagonalized by the FFT; a layer is irfftn(sqrt(lambda) * rfftn(Z)) for a
white grid Z. Bands whose kernel has shrunk below one grid spacing are drawn
directly as independent per-site noise.
"""

import math
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import fft

from gmc_lab.exceptions import ParameterError, SamplingError
from field_sampler.bands import band_covariance, band_layout, bands_below
from field_sampler.streams import make_generator

logger = logging.getLogger(__name__)

CLIP_BUDGET = 1e-6
DEPTH_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FieldSample:
    grid: object
    params: object
    bands: tuple
    layers: np.ndarray
    rng_seed: int
    psd_clip_mass: float
    t_max: float
    delta_u: float
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.layers.setflags(write=False)
        cumulative = np.cumsum(self.layers, axis=0)
        cumulative.setflags(write=False)
        object.__setattr__(self, 'cumulative', cumulative)

    def truncated(self, t):
        """X_t on the grid: the sum of all layers with u_center < t."""
        if t < 0 or t > self.t_max + DEPTH_TOL:
            raise ParameterError(f"truncation depth {t} outside [0, {self.t_max}]")
        count = bands_below(self.bands, t)
        if count == 0:
            return np.zeros(self.grid.shape)
        return self.cumulative[count - 1]

    @property
    def full(self):
        return self.truncated(self.t_max)


class FieldSynthesizer:
    """Factorizes every band of (params, grid, t_max, delta_u) once; draws samples by seed."""

    def __init__(self, params, grid, t_max, delta_u):
        if params.dim != grid.dim:
            raise ParameterError(f"field dimension {params.dim} does not match {grid}")
        self.params = params
        self.grid = grid
        self.t_max = t_max
        self.delta_u = delta_u
        self.bands = band_layout(params, t_max, delta_u)
        self.total_variance = float(sum(band.variance for band in self.bands))
        self._factors = []
        clip_mass = 0.0
        for band in self.bands:
            if band.is_white(grid):
                self._factors.append(None)
                continue
            eigenvalues = fft.fftn(band_covariance(params, grid, band)).real
            negative = eigenvalues[eigenvalues < 0.0]
            band_clip = float(-negative.sum()) / grid.size
            clip_mass += band_clip
            half = eigenvalues[..., : grid.points_per_dim // 2 + 1]
            self._factors.append(np.sqrt(np.clip(half, 0.0, None)))
            logger.debug("band u=%.3f clipped %.3e of %.3e", band.u_center, band_clip, band.variance)
        self.psd_clip_mass = clip_mass
        if clip_mass > CLIP_BUDGET * self.total_variance:
            raise SamplingError(
                f"clipped spectral mass {clip_mass:.3e} exceeds {CLIP_BUDGET:.0e} x variance "
                f"{self.total_variance:.3f} on {grid}"
            )
        logger.info(
            "factorized %d bands on %s (t_max=%s, delta_u=%s, clip=%.2e)",
            len(self.bands), grid, t_max, delta_u, clip_mass,
        )

    def _layer(self, band, factor, rng):
        white = rng.standard_normal(self.grid.shape)
        if factor is None:
            return math.sqrt(band.variance) * white
        return fft.irfftn(factor * fft.rfftn(white), s=self.grid.shape)

    def sample(self, seed):
        rng = make_generator(seed)
        layers = np.empty((len(self.bands),) + self.grid.shape)
        for j, (band, factor) in enumerate(zip(self.bands, self._factors)):
            layers[j] = self._layer(band, factor, rng)
        return FieldSample(
            grid=self.grid,
            params=self.params,
            bands=self.bands,
            layers=layers,
            rng_seed=int(seed),
            psd_clip_mass=self.psd_clip_mass,
            t_max=self.t_max,
            delta_u=self.delta_u,
        )


def sample_field(params, grid, t_max, delta_u, seed):
    return FieldSynthesizer(params, grid, t_max, delta_u).sample(seed)
