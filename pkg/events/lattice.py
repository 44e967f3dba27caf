"""
The scale lattices e^{-n} Z^d and the good-event thresholds built on them.

The cell of a lattice point p is Q_n(p) = p + (e^{-n}/2) [-1, 1)^d, so the
representative of x is e^{-n} floor(x e^n + 1/2) coordinatewise. Scales e^{-n}
are not nested; every partition identity uses this one half-open convention.
"""

import math
from dataclasses import dataclass

import numpy as np

from gmc_lab.exceptions import ParameterError


def cell_rep(x, n):
    """Representative x_n of the cell of Lambda_n containing x; vectorized over x."""
    lattice = ScaleLattice(n)
    return lattice.cell_size * lattice.cell_index(x)


@dataclass(frozen=True)
class ScaleLattice:
    scale_index: int
    dim: int = 1

    @property
    def cell_size(self):
        return math.exp(-self.scale_index)

    def representative(self, x):
        return cell_rep(x, self.scale_index)

    def cell_index(self, x):
        """Integer lattice coordinates of the cell containing x."""
        return np.floor(np.asarray(x, dtype=float) / self.cell_size + 0.5).astype(np.int64)

    def representative_sites(self, grid):
        """Grid site index of x_n for every site x of ``grid``, one index array per axis."""
        reps = [self.representative(c) for c in grid.coordinates]
        return tuple(np.rint(r * grid.points_per_dim).astype(np.int64) % grid.points_per_dim for r in reps)


def default_gamma_hat(gamma, d):
    """A threshold slope inside (gamma, sqrt(2d))."""
    return gamma + 0.6 * (math.sqrt(2 * d) - gamma)


@dataclass(frozen=True)
class GoodEventConfig:
    """
    E_n(x) = {X_n(x_n) <= gamma_hat n} checked for n0 <= n <= N, i.e. between
    delta = e^{-n0} and epsilon = e^{-N}.
    """
    gamma_hat: float
    n0: int
    N: int

    def __post_init__(self):
        if not math.isfinite(self.gamma_hat):
            raise ParameterError(f"gamma_hat must be finite, got {self.gamma_hat}")
        if int(self.n0) != self.n0 or int(self.N) != self.N or not 0 <= self.n0 <= self.N:
            raise ParameterError(f"scale indices must satisfy 0 <= n0 <= N, got n0={self.n0}, N={self.N}")

    @property
    def delta(self):
        return math.exp(-self.n0)

    @property
    def epsilon(self):
        return math.exp(-self.N)

    @property
    def scales(self):
        return range(int(self.n0), int(self.N) + 1)

    @classmethod
    def for_gamma(cls, gamma, d, n0, N):
        return cls(gamma_hat=default_gamma_hat(gamma, d), n0=n0, N=N)
