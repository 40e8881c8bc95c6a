"""Half-integer Bessel functions, their positive roots, and real spherical harmonics."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq
from scipy.special import lpmv


def _check_half_integer(nu: float) -> int:
    """Return the integer 2*nu, rejecting non-half-integer or nu < -1/2."""
    two_nu = round(2.0 * nu)
    if abs(2.0 * nu - two_nu) > 1e-12 or two_nu % 2 == 0 or two_nu < -1:
        raise ValueError(f"order must be a half-integer l +/- 1/2 with l >= 0, got {nu}")
    return int(two_nu)


def bessel_half(nu: float, y):
    """Bessel function J_nu for half-integer nu = l +/- 1/2.

    Uses the closed trigonometric forms at nu = +/-1/2 and the upward
    recurrence J_{nu+1}(y) = (2 nu / y) J_nu(y) - J_{nu-1}(y) above.
    """
    two_nu = _check_half_integer(nu)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        raise ValueError("bessel_half requires y > 0")
    pref = np.sqrt(2.0 / (np.pi * y))
    jm = pref * np.cos(y)   # J_{-1/2}
    jp = pref * np.sin(y)   # J_{+1/2}
    if two_nu == -1:
        return jm if jm.ndim else float(jm)
    cur_order = 0.5
    prev, cur = jm, jp
    while cur_order < nu - 1e-9:
        prev, cur = cur, (2.0 * cur_order / y) * cur - prev
        cur_order += 1.0
    return cur if cur.ndim else float(cur)


def bessel_root(nu: float, j: int) -> float:
    """j-th positive root of J_nu, ascending in j, for half-integer nu.

    nu = -1/2 and 1/2 have the exact roots (j - 1/2) pi and j pi; other
    orders are bracketed using the asymptotic pi spacing of Bessel zeros
    and resolved with Brent's method.
    """
    two_nu = _check_half_integer(nu)
    if j < 1:
        raise ValueError("root index must be >= 1")
    if two_nu == -1:
        return (j - 0.5) * np.pi
    if two_nu == 1:
        return j * np.pi
    # McMahon: the j-th zero of J_nu sits near beta = (j + nu/2 - 1/4) pi.
    # The first zero exceeds nu, and J_nu > 0 below it; starting the bracket
    # at nu also avoids the cancellation-prone recurrence region y << nu.
    f = lambda y: bessel_half(nu, y)
    roots: list[float] = []
    lo = max(1.0, float(nu))
    hi = (1 + 0.5 * nu - 0.25) * np.pi
    while len(roots) < j:
        while f(lo) * f(hi) > 0.0:
            hi += 0.5 * np.pi
            if hi - lo > 50 * np.pi:
                raise RuntimeError(f"failed to bracket root {len(roots) + 1} of J_{nu}")
        roots.append(brentq(f, lo, hi, xtol=1e-13))
        lo = roots[-1] + 1e-9
        hi = roots[-1] + np.pi
    return roots[j - 1]


def spherical_harmonic(l: int, m: int, theta, phi):
    """Real orthonormal spherical harmonics on the unit sphere.

    Normalized so that the L^2(S^2) inner products are delta_{ll'} delta_{mm'};
    the Condon-Shortley phase is omitted.
    """
    if abs(m) > l:
        raise ValueError(f"|m| = {abs(m)} exceeds degree l = {l}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    am = abs(m)
    ct = np.cos(theta)
    # lpmv carries the Condon-Shortley factor (-1)^m; strip it.
    plm = (-1.0) ** am * lpmv(am, l, ct)
    from math import factorial

    norm = np.sqrt((2 * l + 1) / (4.0 * np.pi) * factorial(l - am) / factorial(l + am))
    if m == 0:
        out = norm * plm
    elif m > 0:
        out = np.sqrt(2.0) * norm * plm * np.cos(am * phi)
    else:
        out = np.sqrt(2.0) * norm * plm * np.sin(am * phi)
    return out if np.ndim(out) else float(out)
