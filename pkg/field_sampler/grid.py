from dataclasses import dataclass
from functools import cached_property

import numpy as np

from gmc_lab.exceptions import GridMismatchError, ParameterError

MIN_POINTS = 64


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on the unit torus [0, 1)^d."""
    dim: int
    points_per_dim: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ParameterError(f"grid dimension must be 1 or 2, got {self.dim}")
        m = self.points_per_dim
        if m < MIN_POINTS or m & (m - 1):
            raise ParameterError(f"points_per_dim must be a power of two >= {MIN_POINTS}, got {m}")

    def __str__(self):
        return f"GridSpec(d={self.dim}, M={self.points_per_dim})"

    @property
    def spacing(self):
        return 1.0 / self.points_per_dim

    @property
    def shape(self):
        return (self.points_per_dim,) * self.dim

    @property
    def size(self):
        return self.points_per_dim ** self.dim

    @cached_property
    def coordinates(self):
        """Site coordinates, one array per axis, each of ``shape``."""
        axis = np.arange(self.points_per_dim) * self.spacing
        return np.meshgrid(*([axis] * self.dim), indexing='ij')

    @cached_property
    def offset_distance(self):
        """Minimum-image distance of each site from the origin."""
        squared = sum(np.minimum(c, 1.0 - c) ** 2 for c in self.coordinates)
        return np.sqrt(squared)

    def site_index(self, point):
        """Nearest grid site of a torus point."""
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if point.size != self.dim:
            raise ParameterError(f"point {point} does not have dimension {self.dim}")
        return tuple(int(i) for i in np.rint(point * self.points_per_dim).astype(int) % self.points_per_dim)

    def check_field(self, values):
        shape = np.shape(values)
        if shape != self.shape:
            raise GridMismatchError(self, f"array of shape {shape}")

    def check_same(self, other):
        if other != self:
            raise GridMismatchError(self, other)
