"""
Riemann-sum estimators of the regularized functionals

    I_eps(f, k) = int f(x) :X_eps(x)^k e^{gamma X_eps(x)}: dx

on a sampled grid field, and the power series in gamma' - gamma that
re-expands the complex Wick exponential around a real gamma.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from gmc_lab.exceptions import ConvergenceError, ParameterError
from hermite_wick.wick import WickTriple, evaluate_wick

logger = logging.getLogger(__name__)

SERIES_START_CAP = 16
SERIES_MAX_CAP = 1024
QUIET_TERMS = 3


@dataclass(frozen=True)
class GmcEstimate:
    value: complex
    k: int
    gamma: complex
    epsilon: Optional[float] = None
    reg: Any = None
    seed: Optional[int] = None

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ParameterError(f"estimate for k={self.k}, gamma={self.gamma} is not finite")


def _check_sigma(sigma_eps):
    if not sigma_eps > 0:
        raise ParameterError(f"sigma_eps must be positive, got {sigma_eps}")


def wick_field_grid(field, k, gamma, sigma_eps):
    """:X^k e^{gamma X}: at every site, for a field of pointwise standard deviation sigma_eps."""
    _check_sigma(sigma_eps)
    evaluation = evaluate_wick(np.asarray(field, dtype=float), WickTriple(k, gamma, sigma_eps))
    return np.asarray(evaluation.value, dtype=complex)


def wick_power_sequence(field, k_max, gamma, sigma_eps):
    """
    Grids of :X^k e^{gamma X}: for k = 0..k_max, stacked on the leading axis.

    With W = X - gamma sigma^2, P_k = sigma^k H_k(W / sigma) obeys
    P_{k+1} = W P_k - k sigma^2 P_{k-1}.
    """
    _check_sigma(sigma_eps)
    field = np.asarray(field, dtype=float)
    g = complex(gamma)
    var = sigma_eps * sigma_eps
    shifted = field - g * var
    out = np.empty((k_max + 1,) + field.shape, dtype=complex)
    out[0] = 1.0
    if k_max >= 1:
        out[1] = shifted
    for k in range(1, k_max):
        out[k + 1] = shifted * out[k] - k * var * out[k - 1]
    return out * wick_field_grid(field, 0, g, sigma_eps)


def _check_grid(f, field):
    f.grid.check_field(np.asarray(field))


def estimate_I(f, field, k, gamma, sigma_eps, epsilon=None, reg=None, seed=None):
    _check_grid(f, field)
    value = np.mean(f.values * wick_field_grid(field, k, gamma, sigma_eps))
    return GmcEstimate(value=complex(value), k=k, gamma=gamma, epsilon=epsilon, reg=reg, seed=seed)


def direct_complex(f, field, gamma_prime, sigma_eps):
    """Grid sum of f :e^{gamma' X}: for complex gamma'."""
    _check_grid(f, field)
    return complex(np.mean(f.values * wick_field_grid(field, 0, gamma_prime, sigma_eps)))


def series_eval(f, field, gamma, gamma_prime, tol, sigma_eps):
    """
    Partial sums of sum_k (gamma' - gamma)^k / k! I(f, k, gamma).

    Stops once QUIET_TERMS consecutive terms fall below tol times the partial
    sum. The term cap starts at 16 and doubles up to 1024. Returns the value
    and the number of terms used.
    """
    _check_grid(f, field)
    _check_sigma(sigma_eps)
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    field = np.asarray(field, dtype=float)
    g = complex(gamma)
    weighted = f.values * wick_field_grid(field, 0, g, sigma_eps)
    y = (field - g * sigma_eps * sigma_eps) / sigma_eps
    hs = complex(gamma_prime - gamma) * sigma_eps

    # q_k = (h sigma)^k H_k(y) / k!
    q_prev, q = np.zeros_like(y), np.ones_like(y)
    total = complex(np.mean(weighted))
    cap, quiet, k = SERIES_START_CAP, 0, 0
    while True:
        q_prev, q = q, (hs * y * q - hs * hs * q_prev) / (k + 1)
        k += 1
        term = complex(np.mean(weighted * q))
        total += term
        if not np.isfinite(total):
            raise ConvergenceError(
                f"series around gamma={gamma} for gamma'={gamma_prime} overflowed after {k + 1} terms"
            )
        quiet = quiet + 1 if abs(term) <= tol * abs(total) else 0
        if quiet >= QUIET_TERMS:
            logger.debug("series around gamma=%s converged after %d terms", gamma, k + 1)
            return total, k + 1
        if k + 1 >= cap:
            if cap >= SERIES_MAX_CAP:
                raise ConvergenceError(
                    f"series around gamma={gamma} for gamma'={gamma_prime} did not settle "
                    f"within {SERIES_MAX_CAP} terms (sigma_eps={sigma_eps:.3f})"
                )
            cap *= 2
            logger.debug("series term cap raised to %d", cap)
