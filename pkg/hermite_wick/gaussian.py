"""
Gaussian expectations of Hermite polynomials, closed forms and Gauss-Hermite oracles.

    E[H_k(s X + m)] = (1 - s^2)^{k/2} H_k(m / sqrt(1 - s^2))

and the two-point analogue for a correlated pair (X1, X2) with E[X1 X2] = rho.
"""

import math
from typing import NamedTuple, Optional

import numpy as np
from numpy.polynomial import hermite_e

from gmc_lab.exceptions import ParameterError
from hermite_wick.polynomials import hermite_eval, hermite_recurrence

ORACLE_NODES = 64


class HermitePair(NamedTuple):
    sigma2: float
    m2: float
    rho: float


def _check_sigma(name, value):
    if not -1.0 < value < 1.0:
        raise ParameterError(f"{name} must lie in (-1, 1), got {value}")


def _check_pair(sigma1, pair):
    _check_sigma('sigma1', sigma1)
    if pair is not None:
        _check_sigma('sigma2', pair.sigma2)
        if abs(pair.rho) > 1:
            raise ParameterError(f"rho must lie in [-1, 1], got {pair.rho}")


def gauss_expect_hermite(k, sigma1, m1, pair: Optional[HermitePair] = None):
    _check_pair(sigma1, pair)
    v1 = 1.0 - sigma1 * sigma1
    if pair is None:
        return v1 ** (k / 2) * hermite_eval(k, m1 / math.sqrt(v1))
    sigma2, m2, rho = pair
    v2 = 1.0 - sigma2 * sigma2
    a1, a2 = m1 / math.sqrt(v1), m2 / math.sqrt(v2)
    total = 0.0
    for l in range(k + 1):
        weight = (
            (v1 * v2) ** ((k - l) / 2) * (rho * sigma1 * sigma2) ** l
            * math.factorial(k) ** 2 / (math.factorial(l) * math.factorial(k - l) ** 2)
        )
        total += weight * hermite_eval(k - l, a1) * hermite_eval(k - l, a2)
    return total


def _standard_nodes(nodes):
    x, w = hermite_e.hermegauss(nodes)
    return x, w / math.sqrt(2.0 * math.pi)


def gauss_hermite_expectation(k, sigma1, m1, pair: Optional[HermitePair] = None, nodes=ORACLE_NODES):
    """Quadrature oracle for :func:`gauss_expect_hermite`; the pair uses X2 = rho X1 + sqrt(1-rho^2) Z."""
    _check_pair(sigma1, pair)
    x, w = _standard_nodes(nodes)
    first = hermite_recurrence(k, sigma1 * x + m1)
    if pair is None:
        return float(np.dot(w, first))
    sigma2, m2, rho = pair
    x2 = rho * x[:, None] + math.sqrt(1.0 - rho * rho) * x[None, :]
    second = hermite_recurrence(k, sigma2 * x2 + m2)
    return float(np.einsum('i,j,i,ij->', w, w, first, second))


def hermite_orthogonality(k_max, nodes=ORACLE_NODES):
    """Gram matrix E[H_j(X) H_k(X)], j, k <= k_max, which should equal diag(k!)."""
    x, w = _standard_nodes(nodes)
    values = np.stack([hermite_recurrence(k, x) for k in range(k_max + 1)])
    return (values * w) @ values.T
