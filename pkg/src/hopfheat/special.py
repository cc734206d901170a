"""Jacobi polynomials P_k^(0,n) and the theta-type sums behind the spherical kernel.

The polynomials are evaluated by the standard three-term recurrence in the
degree, which is stable for large k.  The theta sum

    S(t, d) = sum_{k in Z} (d + 2*k*pi) * exp(-(d + 2*k*pi)^2 / (4*t))

has two representations: the direct Gaussian-side sum (fast for small t) and
the dual trigonometric series obtained by Poisson summation,

    S(t, d) = (4 t^{3/2} / sqrt(pi)) * sum_{m >= 1} m * exp(-t m^2) * sin(m d),

fast for large t.  Both are provided; agreement between them is one of the
library's primary self-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JacobiIndex",
    "jacobi_eval",
    "jacobi_sup_bound",
    "theta_sum_direct",
    "theta_sum_dual",
]

_X_SLACK = 1e-12


@dataclass(frozen=True)
class JacobiIndex:
    """Index (k, n) of the Jacobi polynomial P_k^(0,n) with alpha=0, beta=n."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 0 or self.n < 0:
            raise ValueError(f"JacobiIndex requires k >= 0 and n >= 0, got {self}")


def jacobi_eval(idx: JacobiIndex, x):
    """Evaluate P_k^(0,n)(x) by the three-term recurrence in the degree.

    Accepts a scalar or ndarray argument x in [-1, 1] (with a small
    floating-point slack).  Normalized so that P_k^(0,n)(1) = 1.
    """
    k, n = idx.k, idx.n
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0 + _X_SLACK):
        raise ValueError(f"jacobi_eval: |x| > 1 + {_X_SLACK}")
    scalar = np.isscalar(x) or xa.ndim == 0
    if k == 0:
        out = np.ones_like(xa)
        return float(out) if scalar else out
    pm1 = np.ones_like(xa)
    p = (n + 2) / 2 * xa - n / 2
    for m in range(2, k + 1):
        a = 2 * m * (m + n) * (2 * m + n - 2)
        c = 2 * (m - 1) * (m + n - 1) * (2 * m + n)
        b1 = (2 * m + n - 1) * (2 * m + n) * (2 * m + n - 2)
        b0 = -(2 * m + n - 1) * n * n
        pm1, p = p, ((b1 * xa + b0) * p - c * pm1) / a
    return float(p) if scalar else p


def jacobi_sup_bound(idx: JacobiIndex) -> float:
    """Upper bound for max |P_k^(0,n)| on [-1, 1].

    With alpha = 0 <= beta = n the maximum is attained at x = -1 where
    |P_k^(0,n)(-1)| = binom(k+n, k), of order k^n.  Used only for series
    truncation, never for values.
    """
    return float(math.comb(idx.k + idx.n, idx.k))


def theta_sum_direct(t: float, d: float) -> float:
    """Gaussian-side sum S(t, d) = sum_{k in Z} (d+2k*pi) exp(-(d+2k*pi)^2/4t).

    Accurate for small t where only a handful of images contribute.
    Truncated once three consecutive image pairs fall below 1e-16 times the
    accumulated absolute sum.
    """
    if t <= 0:
        raise ValueError("theta_sum_direct: t must be positive")
    total = d * math.exp(-d * d / (4 * t))
    abs_total = abs(total)
    small = 0
    for k in range(1, 1000):
        up = d + 2 * k * math.pi
        dn = d - 2 * k * math.pi
        term = up * math.exp(-up * up / (4 * t)) + dn * math.exp(-dn * dn / (4 * t))
        total += term
        abs_total += abs(term)
        if abs(term) < 1e-16 * (abs_total + 1e-300):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return total


def theta_sum_dual(t: float, d: float) -> float:
    """Dual series for S(t, d) from Poisson summation; accurate for large t.

    S(t, d) = (4 t^{3/2} / sqrt(pi)) * sum_{m>=1} m exp(-t m^2) sin(m d).
    """
    if t <= 0:
        raise ValueError("theta_sum_dual: t must be positive")
    total = 0.0
    abs_total = 0.0
    small = 0
    for m in range(1, 100000):
        term = m * math.exp(-t * m * m) * math.sin(m * d)
        total += term
        abs_total += abs(term)
        # the sine factor can vanish at grid-aligned d, so demand three
        # consecutive negligible terms before stopping
        if m * math.exp(-t * m * m) < 1e-16 * (abs_total + 1e-300):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return 4.0 * t ** 1.5 / math.sqrt(math.pi) * total
