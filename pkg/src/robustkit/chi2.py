"""Chi-square quantiles from first principles.

Only the regularized lower incomplete gamma function is needed:
``P(k/2, x/2)`` is the chi-square CDF with ``k`` degrees of freedom.  It is
evaluated by the usual split between the series expansion (x < s + 1) and
the Lentz continued fraction for the complement, and the quantile is then
obtained by bisection.  Keeping this local avoids dragging in a statistics
dependency for one function.
"""

from __future__ import annotations

import math

from .errors import AlphaOutOfRange

_MAX_ITER = 500
_EPS = 1e-15


def _gammainc_series(s: float, x: float) -> float:
    # P(s, x) via the power series; reliable for x < s + 1
    term = 1.0 / s
    total = term
    a = s
    for _ in range(_MAX_ITER):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))

def _gammainc_cf(s: float, x: float) -> float:
    # Q(s, x) via modified Lentz continued fraction; reliable for x >= s + 1
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + s * math.log(x) - math.lgamma(s))

def gammainc_lower(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) for s > 0, x >= 0."""
    if x < 0.0 or s <= 0.0:
        raise ValueError("gammainc_lower requires s > 0 and x >= 0")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return _gammainc_series(s, x)
    return 1.0 - _gammainc_cf(s, x)

def chi2_cdf(x: float, k: int) -> float:
    if x <= 0.0:
        return 0.0
    return gammainc_lower(0.5 * k, 0.5 * x)

def chi2_quantile(alpha: float, k: int, tol: float = 1e-9) -> float:
    """Smallest x with ``chi2_cdf(x, k) >= alpha``, by bisection.

    ``alpha`` must lie strictly inside (0, 1); ``k`` is a positive integer
    number of degrees of freedom.
    """
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(f"confidence level must be in (0, 1), got {alpha}")
    if k < 1:
        raise ValueError("degrees of freedom must be a positive integer")
    hi = max(1.0, float(k))
    while chi2_cdf(hi, k) < alpha:
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("chi-square quantile bracket failed")
    lo = 0.0
    # bisection: interval halves each step, stop at the requested tolerance
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if chi2_cdf(mid, k) < alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

__all__ = ["chi2_cdf", "chi2_quantile", "gammainc_lower"]
