"""Regularized lower incomplete gamma function and the chi-square CDF."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

__all__ = ["GammaTolerance", "regularized_lower_gamma", "chi2_cdf", "chi2_cdf_table"]

_TINY = 1e-300


@dataclass(frozen=True)
class GammaTolerance:
    tol: float = 1e-12
    max_iter: int = 500

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


DEFAULT_TOLERANCE = GammaTolerance()


def _lower_series(a, x, log_prefactor, tol):
    # P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(tol.max_iter):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * tol.tol * 1e-3:
            return total * math.exp(log_prefactor)
    raise NumericalError(f"gamma series did not converge for a={a}, x={x}")


def _upper_fraction(a, x, log_prefactor, tol):
    # Modified Lentz evaluation of the continued fraction for Q(a, x).
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, tol.max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol.tol * 1e-3:
            return math.exp(log_prefactor) * h
    raise NumericalError(f"gamma continued fraction did not converge for a={a}, x={x}")


def regularized_lower_gamma(a, x, tol=DEFAULT_TOLERANCE):
    """P(a, x) = gamma(a, x) / Gamma(a) for a > 0, x >= 0.

    Power series below x = a + 1, continued fraction for the complement above.
    Raises :class:`NumericalError` instead of returning an unconverged value.
    """
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    if x < 0 or math.isnan(x):
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    log_prefactor = a * math.log(x) - x - math.lgamma(a)
    if x < a + 1.0:
        value = _lower_series(a, x, log_prefactor, tol)
    else:
        value = 1.0 - _upper_fraction(a, x, log_prefactor, tol)
    return min(1.0, max(0.0, value))


def chi2_cdf(t, dof, tol=DEFAULT_TOLERANCE):
    """P(X < t) for X ~ chi-square with ``dof`` degrees of freedom."""
    if dof < 1:
        raise ValueError(f"dof must be a positive integer, got {dof}")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return regularized_lower_gamma(0.5 * dof, 0.5 * t, tol)


def chi2_cdf_table(ts, max_dof, tol=DEFAULT_TOLERANCE):
    """Array ``F[i, l] = chi2_cdf(ts[i], l)`` for l in 1..max_dof; column 0 is unused (1.0)."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    table = np.ones((ts.size, max_dof + 1))
    for i, t in enumerate(ts):
        for l in range(1, max_dof + 1):
            table[i, l] = chi2_cdf(float(t), l, tol)
    return table
