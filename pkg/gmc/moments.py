"""
Deterministic moment oracles for the grid estimators.

All double integrals are grid double sums against a stationary covariance
grid c(delta) = Cov(X(x), X(x + delta)), evaluated as

    sum_{x, y} f(x) f(y) P(c(y - x)) / N^2 = sum_delta P(c(delta)) A_f(delta) / N^2

with A_f(delta) = sum_x f(x) f(x + delta) computed by FFT. Second moments pair
the two functionals as written, E[I(f, j) I(f, k)]; the conjugate flag pairs
the first with the conjugate of the second instead.
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft

from gmc_lab.exceptions import ParameterError
from hermite_wick.wick import wick_pair_kernel

MAX_DOUBLE_SUM_SITES = 512 ** 2


@dataclass(frozen=True)
class Mean:
    k: int = 0


@dataclass(frozen=True)
class Second:
    k: int
    conjugate: bool = False


@dataclass(frozen=True)
class Cross:
    j: int
    k: int
    conjugate: bool = False


@dataclass(frozen=True)
class ComplexL2:
    gamma_prime: complex


def autocorrelation(f):
    """A_f(delta) = sum_x f(x) f(x + delta) on the torus grid."""
    spectrum = fft.rfftn(f.values)
    return fft.irfftn(np.abs(spectrum) ** 2, s=f.grid.shape)


def _check_cov(f, cov_grid):
    cov_grid = np.asarray(cov_grid, dtype=float)
    f.grid.check_field(cov_grid)
    if f.grid.size > MAX_DOUBLE_SUM_SITES:
        raise ParameterError(
            f"double sums are limited to {MAX_DOUBLE_SUM_SITES} sites, {f.grid} has {f.grid.size}"
        )
    return cov_grid


def double_sum(f, kernel_values):
    """(1/N^2) sum_{x,y} f(x) f(y) P(x - y) for P given on the offset grid."""
    total = np.sum(kernel_values * autocorrelation(f))
    return complex(total) / f.grid.size ** 2


def moment_oracle(mode, f, gamma, cov_grid=None):
    """
    Exact-in-discretization moments of I(f, k, gamma).

    ``Mean(k)`` needs no covariance. ``Second(k)`` and ``Cross(j, k)`` give
    E[I(f, j) I(f, k)], or E[I(f, j) conj(I(f, k))] with ``conjugate=True``;
    the two agree for real gamma. ``ComplexL2(gamma')`` gives E|int f :e^{gamma' X}:|^2.
    """
    if isinstance(mode, Mean):
        return complex(f.integral) if mode.k == 0 else 0j
    if cov_grid is None:
        raise ParameterError(f"{mode} requires a covariance grid")
    cov_grid = _check_cov(f, cov_grid)
    g = complex(gamma)
    paired = g.conjugate() if getattr(mode, 'conjugate', False) else g
    if isinstance(mode, Second):
        kernel = wick_pair_kernel(mode.k, mode.k, g, paired, cov_grid)
    elif isinstance(mode, Cross):
        kernel = wick_pair_kernel(mode.j, mode.k, g, paired, cov_grid)
    elif isinstance(mode, ComplexL2):
        kernel = np.exp(abs(complex(mode.gamma_prime)) ** 2 * cov_grid)
    else:
        raise ParameterError(f"unknown moment mode {mode!r}")
    return double_sum(f, kernel)


def cauchy_gap_oracle(f, gamma, cov11, cov12, cov22):
    """
    E|I_{eps1}(f, 0) - I_{eps2}(f, 0)|^2 from the covariance grids of the two
    regularizations and their cross covariance.
    """
    cov11, cov12, cov22 = (_check_cov(f, c) for c in (cov11, cov12, cov22))
    s = abs(complex(gamma)) ** 2
    kernel = np.exp(s * cov11) - 2.0 * np.exp(s * cov12) + np.exp(s * cov22)
    return float(double_sum(f, kernel).real)
