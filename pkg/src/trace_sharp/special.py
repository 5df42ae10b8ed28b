"""Sine/cosine power integrals and the dimensional constants of the unit ball.

``psi(k, t)`` is the integral of ``sin**k`` over ``[0, t]`` and ``phi(k, t)``
the integral of ``cos**k``.  Both are evaluated by the two-step recurrences
started from the closed forms for ``k = 0`` and ``k = 1`` (``psi`` switches to
its power series below pi/4).  Every function in this module accepts scalars
or numpy arrays for the angle argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionalConstants",
    "adaptive_simpson",
    "constants",
    "omega",
    "phi",
    "phi_quadrature_oracle",
    "psi",
    "psi_quadrature_oracle",
    "psi_ratio",
]

_SERIES_TERMS = 64
_SERIES_CUTOFF = math.pi / 4


def _angles(t, lo=0.0, hi=math.pi, name="t"):
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < lo) or np.any(arr > hi):
        raise ValueError(f"{name} must lie in [{lo:g}, {hi:g}], got {t!r}")
    return arr


def _out(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def _check_k(k):
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    return int(k)


def _psi_recurrence(k, x):
    s = np.sin(x)
    c = np.cos(x)
    if k % 2 == 0:
        val, j = x.copy(), 0
    else:
        # 1 - cos t without cancellation near 0
        val, j = 2.0 * np.sin(0.5 * x) ** 2, 1
    while j < k:
        j += 2
        val = (j - 1) / j * val - c * s ** (j - 1) / j
    return val


def _psi_series_ratio(k, x):
    # sum_j binom(2j, j) 4**-j sin(x)**(2j) / (k + 1 + 2j); valid for x <= pi/2
    u2 = np.sin(x) ** 2
    coef = 1.0
    acc = np.full_like(x, 1.0 / (k + 1))
    power = np.ones_like(x)
    top = float(np.max(u2, initial=0.0))
    for j in range(1, _SERIES_TERMS):
        coef *= (2 * j - 1) / (2 * j)
        power = power * u2
        acc = acc + coef * power / (k + 1 + 2 * j)
        # later terms shrink by at least u2 each; stop below rounding of acc
        if coef * top**j < 1e-17 * (1.0 - top):
            break
    return acc


def _split(k, x, large_fn):
    """Series on ``x <= pi/4``, ``large_fn`` on the rest, evaluating each only where needed."""
    small = x <= _SERIES_CUTOFF
    out = np.empty_like(x)
    if np.any(small):
        xs = x[small]
        out[small] = _psi_series_ratio(k, xs) * np.sin(xs) ** (k + 1)
    if not np.all(small):
        out[~small] = large_fn(x[~small])
    return out


def psi(k, t):
    """Integral of sin(x)**k over [0, t], for 0 <= t <= pi.

    The upward recurrence loses all relative accuracy for tiny t (the value
    is of order t**(k+1)), so angles up to pi/4 go through the power series
    instead; both branches agree to rounding at the seam.
    """
    k = _check_k(k)
    x = _angles(t)
    val = _split(k, np.atleast_1d(x), lambda xl: _psi_recurrence(k, xl))
    return _out(val.reshape(np.shape(x)), t)


def phi(k, t):
    """Integral of cos(x)**k over [0, t], for 0 <= t <= pi."""
    k = _check_k(k)
    x = _angles(t)
    s = np.sin(x)
    c = np.cos(x)
    if k % 2 == 0:
        val, j = x.copy(), 0
    else:
        val, j = s.copy(), 1
    while j < k:
        j += 2
        val = (j - 1) / j * val + c ** (j - 1) * s / j
    return _out(val, t)


def psi_ratio(k, t):
    """``psi(k, t) / sin(t)**(k + 1)`` on ``[0, pi)``, finite at ``t = 0``.

    Near the origin numerator and denominator both vanish to order k + 1;
    the series form gives the quotient directly, with value 1 / (k + 1)
    at t = 0.
    """
    k = _check_k(k)
    x = _angles(t)
    if np.any(x >= math.pi):
        raise ValueError("psi_ratio is unbounded at t = pi")
    xa = np.atleast_1d(x)
    small = xa <= _SERIES_CUTOFF
    val = np.empty_like(xa)
    if np.any(small):
        val[small] = _psi_series_ratio(k, xa[small])
    if not np.all(small):
        xl = xa[~small]
        val[~small] = _psi_recurrence(k, xl) / np.sin(xl) ** (k + 1)
    return _out(val.reshape(np.shape(x)), t)


def adaptive_simpson(f, a, b, tol=1e-13, min_depth=4, max_depth=60):
    """Adaptive Simpson quadrature of a scalar function on [a, b].

    Intervals are bisected until the two-panel and one-panel estimates agree
    to 15 times the local tolerance; the accepted value carries the
    Richardson correction.  The first ``min_depth`` levels are always split,
    since symmetric integrands can make coarse panels agree by accident.
    """
    if b == a:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - est
        if depth >= max_depth or (depth >= min_depth and abs(delta) <= 15.0 * eps):
            total += left + right + delta / 15.0
        else:
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
    return total


def psi_quadrature_oracle(k, t, tol=1e-13):
    """Independent check of ``psi`` by adaptive quadrature."""
    k = _check_k(k)
    t = float(_angles(t))
    return adaptive_simpson(lambda x: math.sin(x) ** k, 0.0, t, tol)


def phi_quadrature_oracle(k, t, tol=1e-13):
    k = _check_k(k)
    t = float(_angles(t))
    return adaptive_simpson(lambda x: math.cos(x) ** k, 0.0, t, tol)


def omega(n):
    """Volume of the unit n-ball, via log-Gamma so large n does not overflow."""
    if n < 0:
        raise ValueError(f"dimension must be nonnegative, got {n}")
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(1.0 + 0.5 * n))


@dataclass(frozen=True)
class DimensionalConstants:
    """Ball volumes and the derived ratios used throughout the package.

    ``a_n = n omega_n / omega_{n-1}``, ``b_n = (n + 2) omega_n / omega_{n-1}``
    and ``C_n = 4 omega_{n-1}**2 / (n omega_n**2)``.
    """

    n: int
    omega_n: float
    omega_nm1: float
    a_n: float
    b_n: float
    C_n: float

    @property
    def sphere_area(self):
        """Surface measure n * omega_n of the unit sphere."""
        return self.n * self.omega_n

    @property
    def k_mv(self):
        """Sharp mean-value constant n omega_n / (2 omega_{n-1})."""
        return 0.5 * self.a_n


def constants(n):
    if int(n) != n or n < 2:
        raise ValueError(f"dimension n must be an integer >= 2, got {n!r}")
    n = int(n)
    w, wm = omega(n), omega(n - 1)
    return DimensionalConstants(
        n=n,
        omega_n=w,
        omega_nm1=wm,
        a_n=n * w / wm,
        b_n=(n + 2) * w / wm,
        C_n=4.0 * wm * wm / (n * w * w),
    )
