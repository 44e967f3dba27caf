"""
Bounded, compactly supported test functions f sampled on a torus grid.
"""

from dataclasses import dataclass, field

import numpy as np

from gmc_lab.exceptions import ParameterError


def _check_box(box, dim):
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if len(box) != dim:
        raise ParameterError(f"support box {box} does not have dimension {dim}")
    for lo, hi in box:
        if not 0.0 <= lo < hi <= 1.0:
            raise ParameterError(f"support interval ({lo}, {hi}) must be a nonempty sub-interval of [0, 1]")
    return box


def smooth_step(s):
    """C-infinity step: 0 for s <= 0, 1 for s >= 1."""
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    with np.errstate(divide='ignore', over='ignore'):
        rise = np.where(s > 0.0, np.exp(-1.0 / np.where(s > 0.0, s, 1.0)), 0.0)
        fall = np.where(s < 1.0, np.exp(-1.0 / np.where(s < 1.0, 1.0 - s, 1.0)), 0.0)
    return rise / (rise + fall)


@dataclass(frozen=True, eq=False)
class TestFunction:
    grid: object
    values: np.ndarray
    support_box: tuple
    sup_norm: float = field(init=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        self.grid.check_field(values)
        box = _check_box(self.support_box, self.grid.dim)
        outside = np.zeros(self.grid.shape, dtype=bool)
        for coords, (lo, hi) in zip(self.grid.coordinates, box):
            outside |= (coords < lo) | (coords > hi)
        if np.any(values[outside] != 0.0):
            raise ParameterError(f"test function does not vanish outside its support box {box}")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'support_box', box)
        object.__setattr__(self, 'sup_norm', float(np.max(np.abs(values))))

    @property
    def integral(self):
        """Riemann sum of f over the unit torus."""
        return float(self.values.mean())

    @property
    def abs_integral(self):
        return float(np.abs(self.values).mean())

    @classmethod
    def constant(cls, grid, value=1.0):
        return cls(grid, np.full(grid.shape, float(value)), ((0.0, 1.0),) * grid.dim)

    @classmethod
    def indicator(cls, grid, lower, upper):
        """Indicator of the cube [lower, upper]^d."""
        box = ((lower, upper),) * grid.dim
        inside = np.ones(grid.shape, dtype=bool)
        for coords in grid.coordinates:
            inside &= (coords >= lower) & (coords <= upper)
        return cls(grid, inside.astype(float), box)

    @classmethod
    def smoothed_indicator(cls, grid, lower, upper, width=0.05):
        """Product of smooth plateaus equal to 1 on [lower + width, upper - width]^d."""
        if not 0.0 < 2 * width <= upper - lower:
            raise ParameterError(f"transition width {width} does not fit in [{lower}, {upper}]")
        values = np.ones(grid.shape)
        for coords in grid.coordinates:
            values = values * smooth_step((coords - lower) / width) * smooth_step((upper - coords) / width)
        return cls(grid, values, ((lower, upper),) * grid.dim)
