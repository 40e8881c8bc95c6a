"""Convolution-spline temporal basis with C^{2q} smoothness.

On a uniform grid tau_m = m*dt, data are interpolated per interval
(tau_m, tau_{m+1}) by the degree-(4q+1) Hermite blend of the two local
degree-2q Lagrange interpolants P_m and P_{m+1}, matching derivatives
0..2q at both interval ends.  The contribution of each data node j is a
compactly supported piecewise polynomial omega_j; retarded-time field
evaluations need omega_j and its second derivative.

Stencils follow the nearest-node rule S_m = {m-q, .., m+q} with the
one-sided startup form S_m = {0, .., 2q} for m < q.  Since all startup
stencils coincide, the spline on [0, q*dt) reduces to the single
degree-2q interpolant on nodes {0, .., 2q}; intervals m >= q share one
canonical blend in the local variable u = (tau - tau_m)/dt.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from numpy.polynomial import polynomial as P


def _cardinal_coeffs(nodes: np.ndarray) -> np.ndarray:
    """Lagrange cardinal polynomial coefficients, column i for node i."""
    n = nodes.size
    out = np.zeros((n, n))
    for i in range(n):
        others = np.delete(nodes, i)
        c = P.polyfromroots(others) / np.prod(nodes[i] - others)
        out[: c.size, i] = c
    return out


def _derivatives_at(coeffs: np.ndarray, x: float, orders: int) -> np.ndarray:
    """Derivatives 0..orders-1 of polynomials (coeff columns) at x."""
    vals = np.empty((orders, coeffs.shape[1]))
    c = coeffs
    for k in range(orders):
        vals[k] = P.polyval(x, c)
        c = P.polyder(c, axis=0)
    return vals


def _hermite_basis(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Two-point Hermite basis of degree 4q+1 on [0, 1].

    Returns (H0, H1), each of shape (4q+2, 2q+1): column k is the polynomial
    whose k-th derivative is 1 at the corresponding end, all other matched
    derivatives zero.
    """
    d = 4 * q + 2
    m = np.zeros((d, d))
    for k in range(2 * q + 1):
        m[k, k] = factorial(k)
    for k in range(2 * q + 1):
        for i in range(k, d):
            m[2 * q + 1 + k, i] = factorial(i) / factorial(i - k)
    inv = np.linalg.solve(m, np.eye(d))
    return inv[:, : 2 * q + 1], inv[:, 2 * q + 1 :]


@dataclass(frozen=True)
class SplineBasis:
    """Precomputed convolution-spline weight polynomials on a uniform grid."""

    q: int
    dt: float
    startup_coeffs: np.ndarray    # (2q+1 coeffs, 2q+1 nodes) on global u in [0, q)
    startup_d2: np.ndarray
    interior_offsets: np.ndarray  # (2q+2,) node offsets relative to m
    interior_coeffs: np.ndarray   # (4q+2 coeffs, 2q+2 nodes) in local u in [0, 1]
    interior_d2: np.ndarray

    @property
    def support_width(self) -> int:
        return 2 * self.q + 2

    def max_node_index(self, tau_max: float) -> int:
        """Largest node index with nonzero weight for any lag <= tau_max."""
        if tau_max < 0:
            raise ValueError("lag must be nonnegative")
        m = int(np.floor(tau_max / self.dt))
        return max(2 * self.q, m + self.q + 1)

    def weights(self, taus, derivative: int = 0):
        """Node indices and weights of the spline representation at lags ``taus``.

        Returns (idx, w) of shape (len(taus), 2q+2); rows are padded with
        zero-weight entries.  ``derivative`` is 0 for interpolation weights
        omega_j(tau) or 2 for the second-derivative weights omega_j''(tau).
        """
        if derivative not in (0, 2):
            raise ValueError("derivative must be 0 or 2")
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        if np.any(taus < 0):
            raise ValueError("lags must be nonnegative")
        q, dt = self.q, self.dt
        n = taus.size
        width = self.support_width
        idx = np.zeros((n, width), dtype=int)
        w = np.zeros((n, width))
        ug = taus / dt
        m = np.floor(ug).astype(int)
        startup = m < q

        if np.any(startup):
            cs = self.startup_d2 if derivative else self.startup_coeffs
            vals = P.polyval(ug[startup], cs)          # (2q+1, ns)
            idx[startup, : 2 * q + 1] = np.arange(2 * q + 1)
            w[startup, : 2 * q + 1] = vals.T
        interior = ~startup
        if np.any(interior):
            ci = self.interior_d2 if derivative else self.interior_coeffs
            u = ug[interior] - m[interior]
            vals = P.polyval(u, ci)                    # (2q+2, ni)
            idx[interior] = m[interior][:, None] + self.interior_offsets[None, :]
            w[interior] = vals.T
        if derivative == 2:
            w /= dt * dt
        return idx, w


def build_spline_basis(q: int, dt: float) -> SplineBasis:
    """Construct the C^{2q} convolution-spline basis for step ``dt``."""
    if q < 1:
        raise ValueError("spline order q must be >= 1")
    if dt <= 0:
        raise ValueError("time step must be positive")
    startup_nodes = np.arange(2 * q + 1, dtype=float)
    cs = _cardinal_coeffs(startup_nodes)

    h0, h1 = _hermite_basis(q)
    offsets = np.arange(-q, q + 2)
    left = np.arange(-q, q + 1, dtype=float)       # S_m relative to m
    right = np.arange(-q + 1, q + 2, dtype=float)  # S_{m+1} relative to m
    dl = _derivatives_at(_cardinal_coeffs(left), 0.0, 2 * q + 1)    # at u = 0
    dr = _derivatives_at(_cardinal_coeffs(right), 1.0, 2 * q + 1)   # at u = 1
    ci = np.zeros((4 * q + 2, offsets.size))
    for col, o in enumerate(offsets):
        c = np.zeros(4 * q + 2)
        ileft = np.where(left == o)[0]
        if ileft.size:
            c += h0 @ dl[:, ileft[0]]
        iright = np.where(right == o)[0]
        if iright.size:
            c += h1 @ dr[:, iright[0]]
        ci[:, col] = c
    return SplineBasis(
        q=q,
        dt=dt,
        startup_coeffs=cs,
        startup_d2=P.polyder(cs, 2, axis=0),
        interior_offsets=offsets,
        interior_coeffs=ci,
        interior_d2=P.polyder(ci, 2, axis=0),
    )


def spline_weights(basis: SplineBasis, tau: float, derivative: int = 0):
    """Sparse weights {(s, omega_s(tau))} or the second-derivative variant."""
    idx, w = basis.weights([tau], derivative)
    return [(int(s), float(v)) for s, v in zip(idx[0], w[0]) if v != 0.0]


def history_depth(diameter: float, c0: float, dt: float, q: int) -> int:
    """Huygens history cap n_q = ceil(diam/(c0 dt)) + q."""
    return int(np.ceil(diameter / (c0 * dt))) + q
