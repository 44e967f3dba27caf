"""
Wick-ordered powers and exponentials of a centred Gaussian Z of variance sigma^2.

    :Z^k:           = sigma^k H_k(Z / sigma)
    :Z^k e^{gZ}:    = sigma^k H_k((Z - g sigma^2) / sigma) e^{gZ - g^2 sigma^2 / 2}
                    = sum_{n>=0} g^n / n! :Z^{n+k}:
                    = d^k/dg^k :e^{gZ}:

The three representations are the ``closed``, ``series`` and ``derivative``
methods of :func:`wick_power_exp`. The gamma parameter may be complex.
"""

import math
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial import Polynomial

from gmc_lab.exceptions import ParameterError
from hermite_wick.polynomials import hermite_eval

logger = logging.getLogger(__name__)

SERIES_REL_TOL = 1e-16
SERIES_MAX_TERMS = 400
WICK_METHODS = ('closed', 'series', 'derivative')


@dataclass(frozen=True)
class WickTriple:
    k: int
    gamma: complex
    sigma: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise ParameterError(f"Wick power must be a nonnegative integer, got {self.k}")
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")

    @property
    def is_pure_power(self):
        return self.gamma == 0


class WickEvaluation(NamedTuple):
    value: complex
    # sum of absolute contributions; the floating error of ``value`` is a few ulps of this
    scale: float
    terms: int


def _min_terms(z, triple):
    g = abs(triple.gamma)
    return int(math.ceil((g * triple.sigma) ** 2 + g * abs(z))) + 3


def _closed(z, triple):
    """Vectorized over ``z``."""
    k, g, s = triple.k, complex(triple.gamma), triple.sigma
    value = s ** k * hermite_eval(k, (z - g * s * s) / s) * np.exp(g * z - 0.5 * g * g * s * s)
    if np.ndim(value) == 0:
        value = complex(value)
    return WickEvaluation(value=value, scale=np.abs(value), terms=1)


def _series(z, triple):
    """sum_n g^n/n! sigma^{n+k} H_{n+k}(z/sigma), via normalized Hermite values."""
    k, g, s = triple.k, complex(triple.gamma), triple.sigma
    # h_m = sigma^m H_m(z/sigma) / sqrt(m!)
    h_prev, h = 0.0, 1.0
    for m in range(k):
        h_prev, h = h, (z * h - s * s * math.sqrt(m) * h_prev) / math.sqrt(m + 1)
    total, scale, quiet = 0j, 0.0, 0
    floor = _min_terms(z, triple)
    for n in range(SERIES_MAX_TERMS):
        m = n + k
        coeff = g ** n * math.exp(0.5 * math.lgamma(m + 1) - math.lgamma(n + 1))
        term = coeff * h
        total += term
        scale += abs(term)
        quiet = quiet + 1 if abs(term) <= SERIES_REL_TOL * scale else 0
        if quiet >= 3 and n >= floor:
            return WickEvaluation(value=total, scale=scale, terms=n + 1)
        h_prev, h = h, (z * h - s * s * math.sqrt(m) * h_prev) / math.sqrt(m + 1)
    logger.debug("wick series hit the %d-term cap for z=%s, %s", SERIES_MAX_TERMS, z, triple)
    return WickEvaluation(value=total, scale=scale, terms=SERIES_MAX_TERMS)


def _taylor_coefficients(z, s, k, g, floor):
    """Taylor coefficients a_m of g -> e^{gz - g^2 s^2/2} about g = 0, truncated."""
    coeffs = [1.0, z]
    scale, quiet = 0.0, 0
    for m in range(1, SERIES_MAX_TERMS):
        contribution = abs(coeffs[m]) * (m ** k if m else 1) * abs(g) ** max(m - k, 0)
        scale += contribution
        quiet = quiet + 1 if contribution <= SERIES_REL_TOL * scale else 0
        if quiet >= 3 and m >= floor + k:
            break
        coeffs.append((z * coeffs[m] - s * s * coeffs[m - 1]) / (m + 1))
    return np.asarray(coeffs, dtype=complex)


def _derivative(z, triple):
    """k-th derivative in gamma of :e^{gamma z}:, by termwise differentiation of its Taylor series."""
    k, g, s = triple.k, complex(triple.gamma), triple.sigma
    coeffs = _taylor_coefficients(z, s, k, g, _min_terms(z, triple))
    if len(coeffs) <= k:
        coeffs = np.concatenate([coeffs, np.zeros(k + 1 - len(coeffs), dtype=complex)])
    derived = Polynomial(coeffs).deriv(k)
    value = complex(derived(g))
    scale = float(np.sum(np.abs(derived.coef) * abs(g) ** np.arange(len(derived.coef))))
    return WickEvaluation(value=value, scale=max(scale, abs(value)), terms=len(coeffs))


_METHODS = {'closed': _closed, 'series': _series, 'derivative': _derivative}


def evaluate_wick(z, triple, method='closed'):
    try:
        evaluator = _METHODS[method]
    except KeyError:
        raise ParameterError(f"unknown method {method!r}; expected one of {WICK_METHODS}") from None
    return evaluator(z, triple)


def wick_power_exp(z, triple, method='closed'):
    """:z^k e^{gamma z}: for the Gaussian of standard deviation ``triple.sigma``."""
    return evaluate_wick(z, triple, method).value


def wick_pair_moment(j, k, gamma1, gamma2, cov, trunc_tol=1e-16):
    """
    E[:X^j e^{g1 X}: :Y^k e^{g2 Y}:] for jointly Gaussian (X, Y) with E[XY] = cov.

    Pairs the Wick powers of the two series expansions: only n + j = m + k
    survives, each contributing g1^n g2^m / (n! m!) (n+j)! cov^{n+j}.
    """
    if trunc_tol <= 0:
        raise ParameterError(f"trunc_tol must be positive, got {trunc_tol}")
    if j < 0 or k < 0:
        raise ParameterError(f"Wick powers must be nonnegative, got j={j}, k={k}")
    g1, g2 = complex(gamma1), complex(gamma2)
    p = max(j, k)
    # term at the smallest pairing order p = max(j, k)
    term = (
        g1 ** (p - j) * g2 ** (p - k) * cov ** p
        * math.factorial(p) / (math.factorial(p - j) * math.factorial(p - k))
    )
    total = term
    step = g1 * g2 * cov
    for _ in range(SERIES_MAX_TERMS):
        ratio = step * (p + 1) / ((p + 1 - j) * (p + 1 - k))
        term = term * ratio
        p += 1
        total += term
        if term == 0 or (abs(term) <= trunc_tol * abs(total) and abs(ratio) < 1):
            break
    return total


def wick_pair_kernel(j, k, gamma1, gamma2, cov):
    """
    Closed form of :func:`wick_pair_moment`, vectorized over ``cov``:

        d^j/dg1^j d^k/dg2^k e^{g1 g2 cov}
            = sum_i C(j, i) k!/(k-i)! g1^{k-i} (g2 cov)^{j-i} cov^k e^{g1 g2 cov}.
    """
    if j < 0 or k < 0:
        raise ParameterError(f"Wick powers must be nonnegative, got j={j}, k={k}")
    g1, g2 = complex(gamma1), complex(gamma2)
    cov = np.asarray(cov, dtype=float)
    total = np.zeros(cov.shape, dtype=complex)
    for i in range(min(j, k) + 1):
        coeff = math.comb(j, i) * math.perm(k, i) * g1 ** (k - i) * g2 ** (j - i)
        if coeff:
            total += coeff * cov ** (k + j - i)
    return total * np.exp(g1 * g2 * cov)
