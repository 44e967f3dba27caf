"""
Probabilists' Hermite polynomials H_k, orthogonal for the weight e^{-x^2/2}.

Two evaluation paths are kept side by side: the explicit alternating sum
over an exact integer coefficient table (k <= 20) and the three-term
recurrence (numpy's HermiteE Clenshaw evaluation) beyond. Both accept numpy
arrays and complex arguments.
"""

import math
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial import hermite_e

from gmc_lab.exceptions import ParameterError

logger = logging.getLogger(__name__)

EXACT_K_MAX = 20


def _explicit_row(k, exact):
    """Coefficients of x^{k-2m}, m = 0..k//2: k!(-1)^m / (m!(k-2m)! 2^m)."""
    row = []
    for m in range(k // 2 + 1):
        # integer: C(k, 2m) (2m-1)!!
        c = math.comb(k, 2 * m) * math.prod(range(1, 2 * m, 2)) * (-1) ** m
        row.append(c if exact else float(c))
    return tuple(row)


@dataclass(frozen=True)
class HermiteWorkspace:
    k_max: int
    coeffs: tuple

    def row(self, k):
        if k <= self.k_max:
            return self.coeffs[k]
        return _explicit_row(k, exact=False)


def build_workspace(k_max=EXACT_K_MAX):
    if k_max < 0:
        raise ParameterError(f"k_max must be nonnegative, got {k_max}")
    coeffs = tuple(_explicit_row(k, exact=k <= EXACT_K_MAX) for k in range(k_max + 1))
    return HermiteWorkspace(k_max=k_max, coeffs=coeffs)


DEFAULT_WORKSPACE = build_workspace()


def _check_order(k):
    if int(k) != k or k < 0:
        raise ParameterError(f"Hermite order must be a nonnegative integer, got {k}")
    return int(k)


def hermite_explicit(k, x, workspace=DEFAULT_WORKSPACE):
    """H_k(x) from the explicit sum, Horner-evaluated in x^2."""
    k = _check_order(k)
    row = workspace.row(k)
    x2 = x * x
    acc = row[0] * (x2 ** 0)
    for c in row[1:]:
        acc = acc * x2 + c
    return acc * x if k % 2 else acc


def hermite_recurrence(k, x):
    """H_k(x) by the three-term recurrence H_{k+1} = x H_k - k H_{k-1}."""
    k = _check_order(k)
    selector = np.zeros(k + 1)
    selector[k] = 1.0
    return hermite_e.hermeval(x, selector)


def hermite_eval(k, x, workspace=DEFAULT_WORKSPACE):
    k = _check_order(k)
    if k <= min(workspace.k_max, EXACT_K_MAX):
        return hermite_explicit(k, x, workspace)
    return hermite_recurrence(k, x)


def hermite_sequence(k_max, x):
    """Array of H_0(x), ..., H_{k_max}(x) (leading axis is the order)."""
    x = np.asarray(x)
    out = np.empty((k_max + 1,) + x.shape, dtype=np.result_type(x, float))
    out[0] = 1.0
    if k_max >= 1:
        out[1] = x
    for j in range(1, k_max):
        out[j + 1] = x * out[j] - j * out[j - 1]
    return out


def generating_series_residual(t, x, k, K):
    """
    |sum_{n<=K} t^n/n! H_{k+n}(x) - e^{tx - t^2/2} H_k(x - t)|.

    With k = 0 this is the plain generating function.
    """
    k = _check_order(k)
    K = _check_order(K)
    values = hermite_sequence(k + K, x)
    terms = [t ** n / math.factorial(n) * values[k + n] for n in range(K + 1)]
    lhs = math.fsum(terms)
    rhs = math.exp(t * x - 0.5 * t * t) * hermite_eval(k, x - t)
    return abs(lhs - rhs)


UMBRAL_IDENTITIES = ('mix', 'shift', 'scale')


def _umbral_sides(which, k, rho, u, v):
    if which == 'mix':
        s = math.sqrt(1.0 - rho * rho)
        lhs = hermite_eval(k, rho * u + s * v)
        terms = [
            math.comb(k, j) * rho ** j * s ** (k - j) * hermite_eval(j, u) * hermite_eval(k - j, v)
            for j in range(k + 1)
        ]
    elif which == 'shift':
        lhs = hermite_eval(k, u + v)
        terms = [math.comb(k, j) * u ** j * hermite_eval(k - j, v) for j in range(k + 1)]
    elif which == 'scale':
        lhs = hermite_eval(k, rho * u)
        terms = [
            (-1) ** i * rho ** (k - 2 * i) * (1.0 - rho * rho) ** i * math.comb(k, 2 * i)
            * math.factorial(2 * i) / (math.factorial(i) * 2 ** i) * hermite_eval(k - 2 * i, u)
            for i in range(k // 2 + 1)
        ]
    else:
        raise ParameterError(f"unknown umbral identity {which!r}; expected one of {UMBRAL_IDENTITIES}")
    return lhs, terms


def umbral_residual(which, k, rho=0.0, u=0.0, v=0.0, relative=False):
    """
    Gap between the two sides of one of the umbral identities:

    mix    H_k(rho u + sqrt(1-rho^2) v) = sum_j C(k,j) rho^j sqrt(1-rho^2)^{k-j} H_j(u) H_{k-j}(v)
    shift  H_k(u + v) = sum_j C(k,j) u^j H_{k-j}(v)                  (rho ignored)
    scale  H_k(rho u) = sum_i (-1)^i rho^{k-2i} (1-rho^2)^i C(k,2i) (2i)!/(i! 2^i) H_{k-2i}(u)  (v ignored)

    With ``relative`` the gap is divided by max(1, |lhs| + sum |terms|).
    """
    k = _check_order(k)
    if abs(rho) > 1:
        raise ParameterError(f"rho must lie in [-1, 1], got {rho}")
    lhs, terms = _umbral_sides(which, k, rho, u, v)
    gap = abs(lhs - math.fsum(terms))
    if relative:
        return gap / max(1.0, abs(lhs) + math.fsum(abs(term) for term in terms))
    return gap


class MehlerBound(NamedTuple):
    bound: float
    holds: bool


def mehler_bound(k, x, rho):
    """|H_k(x)| <= (1-rho^2)^{-1/4} rho^{-k/2} sqrt(k!) exp(rho x^2 / (2(1+rho)))."""
    k = _check_order(k)
    if not 0.0 < rho < 1.0:
        raise ParameterError(f"rho must lie in (0, 1), got {rho}")
    log_bound = (
        -0.25 * math.log1p(-rho * rho)
        - 0.5 * k * math.log(rho)
        + 0.5 * math.lgamma(k + 1)
        + rho * x * x / (2.0 * (1.0 + rho))
    )
    bound = math.exp(log_bound)
    return MehlerBound(bound=bound, holds=bool(abs(hermite_eval(k, x)) <= bound))
