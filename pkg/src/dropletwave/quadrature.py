"""Quadrature on the unit ball and high-order interpolation inside it.

The ball rule combines a Gauss-Legendre rule in the radial direction with a
Gauss-trapezoidal rule on the sphere (Gauss-Legendre in the polar angle,
trapezoid in azimuth).  The same 1D ingredients also drive the polar-coordinate
rewrite that removes the 1/|x-y| singularity of volume potentials, and the
tensor-product Lagrange interpolation used by the forward solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss


@dataclass(frozen=True)
class QuadratureRule1D:
    """Nodes and weights of a 1D quadrature rule on a reference interval."""

    nodes: np.ndarray
    weights: np.ndarray


def gauss_legendre_rule(n: int) -> QuadratureRule1D:
    """n-point Gauss-Legendre rule on [-1, 1], exact for degree <= 2n-1."""
    if n < 1:
        raise ValueError(f"Gauss-Legendre rule needs n >= 1, got {n}")
    x, w = leggauss(n)
    return QuadratureRule1D(nodes=x, weights=w)


def gauss_legendre_01(n: int) -> QuadratureRule1D:
    """n-point Gauss-Legendre rule mapped to [0, 1]."""
    rule = gauss_legendre_rule(n)
    return QuadratureRule1D(nodes=0.5 * (rule.nodes + 1.0), weights=0.5 * rule.weights)


@dataclass(frozen=True)
class BallQuadrature:
    """Quadrature nodes of the unit ball B(0, 1) with 2*N_r*N_s^2 points.

    Flat arrays are ordered radial-outer, polar-middle, azimuth-inner.
    ``weights`` contain the full volume weights (radial weight times r^2
    Jacobian times surface weight); the 1D ingredients stay accessible for
    the polar rewrite of weakly singular integrals, where the Jacobian
    differs.
    """

    n_radial: int
    n_polar: int
    r_nodes: np.ndarray        # (N_r,) Gauss-Legendre nodes on (0, 1)
    r_weights: np.ndarray      # (N_r,)
    theta_nodes: np.ndarray    # (N_s,) arccos of Legendre nodes, descending
    phi_nodes: np.ndarray      # (2*N_s,) uniform on [0, 2*pi)
    sphere_weights: np.ndarray  # (N_s,) per-theta surface weights pi/N_s * alpha_j
    nodes_polar: np.ndarray    # (N, 3) columns (r', theta, phi)
    nodes: np.ndarray          # (N, 3) Cartesian images
    weights: np.ndarray        # (N,) volume weights

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def theta_sorted(self) -> np.ndarray:
        return self.theta_nodes[::-1]

    def sphere_integral(self, values: np.ndarray) -> float:
        """Integrate samples shaped (N_s, 2*N_s) over the unit sphere."""
        values = np.asarray(values, dtype=float)
        if values.shape != (self.n_polar, 2 * self.n_polar):
            raise ValueError(
                f"expected samples of shape {(self.n_polar, 2 * self.n_polar)}"
            )
        return float(self.sphere_weights @ values.sum(axis=1))


def ball_quadrature(n_radial: int, n_polar: int) -> BallQuadrature:
    """Build the 2*N_r*N_s^2 node rule on the unit ball.

    The sphere factor is the Gauss-trapezoidal rule with theta_j = arccos of
    the N_s Legendre nodes and phi_k = pi*k/N_s, k = 0..2*N_s-1.
    """
    if n_radial < 1 or n_polar < 1:
        raise ValueError("node counts must be positive")
    radial = gauss_legendre_01(n_radial)
    gl = gauss_legendre_rule(n_polar)
    beta, alpha = gl.nodes, gl.weights
    theta = np.arccos(beta)                       # descending in j
    phi = np.pi * np.arange(2 * n_polar) / n_polar
    sphere_w = np.pi / n_polar * alpha

    r = radial.nodes
    rw = radial.weights
    # flat ordering: iota outer, j middle, k inner
    rr = np.repeat(r, n_polar * 2 * n_polar)
    tt = np.tile(np.repeat(theta, 2 * n_polar), n_radial)
    pp = np.tile(np.tile(phi, n_polar), n_radial)
    ww = (
        np.repeat(rw * r**2, n_polar * 2 * n_polar)
        * np.tile(np.repeat(sphere_w, 2 * n_polar), n_radial)
    )
    st = np.sin(tt)
    cart = np.column_stack((rr * st * np.cos(pp), rr * st * np.sin(pp), rr * np.cos(tt)))
    return BallQuadrature(
        n_radial=n_radial,
        n_polar=n_polar,
        r_nodes=r,
        r_weights=rw,
        theta_nodes=theta,
        phi_nodes=phi,
        sphere_weights=sphere_w,
        nodes_polar=np.column_stack((rr, tt, pp)),
        nodes=cart,
        weights=ww,
    )


def direction(theta, phi) -> np.ndarray:
    """Unit direction (sin t cos p, sin t sin p, cos t); broadcasts."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack(
        np.broadcast_arrays(st * np.cos(phi), st * np.sin(phi), np.cos(theta)),
        axis=-1,
    )


def boundary_distance(x, theta, phi, a: float):
    """Distance from an interior point x to the sphere |y| = a along (theta, phi).

    Solves |x + t d| = a for the positive root t.  Evaluated in the form
    (a^2 - |x|^2) / (sqrt(C^2 + a^2 - |x|^2) + C) which is stable when the
    ray points away from the center.
    """
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    if r2 >= a * a:
        raise ValueError(f"point with |x| = {np.sqrt(r2):g} not inside radius {a:g}")
    d = direction(theta, phi)
    c = d @ x
    gap = a * a - r2
    disc = np.sqrt(c * c + gap)
    return np.where(c > 0.0, gap / (disc + c), disc - c)


def _nearest_window(grid: np.ndarray, x: np.ndarray, half: int) -> np.ndarray:
    """Start indices of the (2*half+1)-node window nearest each query on a sorted grid.

    Windows are clamped to the grid ends.
    """
    n = grid.size
    width = 2 * half + 1
    if width > n:
        raise ValueError(f"stencil of {width} nodes exceeds grid of {n}")
    idx = np.searchsorted(grid, x)
    idx = np.clip(idx, 1, n - 1)
    # nearest node: compare the two neighbours of the insertion point
    left_closer = (x - grid[idx - 1]) <= (grid[idx] - x)
    nearest = np.where(left_closer, idx - 1, idx)
    return np.clip(nearest - half, 0, n - width)


def _lagrange_weights(nodes: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Lagrange cardinal weights; nodes (m, k), x (m,) -> (m, k)."""
    m, k = nodes.shape
    w = np.empty((m, k))
    for i in range(k):
        num = np.ones(m)
        den = np.ones(m)
        for j in range(k):
            if j == i:
                continue
            num *= x - nodes[:, j]
            den *= nodes[:, i] - nodes[:, j]
        w[:, i] = num / den
    return w


@dataclass(frozen=True)
class InterpolationStencil:
    """Tensor-product Lagrange stencil: flat node indices and weights."""

    half_width: int
    indices: np.ndarray  # (m, (2*half+1)^3) flat indices into the ball rule
    weights: np.ndarray  # same shape; rows sum to 1


def interpolation_stencil(
    rule: BallQuadrature, points_polar: np.ndarray, half_width: int
) -> InterpolationStencil:
    """Stencils for points given as (r', theta, phi) rows in the unit ball.

    Per coordinate the 2*half_width+1 nearest grid nodes are used; radial and
    polar windows clamp at the grid edge, the azimuthal window wraps.
    """
    n0 = half_width
    width = 2 * n0 + 1
    if width > min(rule.n_radial, rule.n_polar):
        raise ValueError(
            f"stencil half-width {n0} too wide for grid "
            f"({rule.n_radial} radial, {rule.n_polar} polar nodes)"
        )
    pts = np.atleast_2d(np.asarray(points_polar, dtype=float))
    r, th, ph = pts[:, 0], pts[:, 1], pts[:, 2]
    m = pts.shape[0]
    nphi = rule.phi_nodes.size

    r_start = _nearest_window(rule.r_nodes, r, n0)
    r_idx = r_start[:, None] + np.arange(width)[None, :]
    r_w = _lagrange_weights(rule.r_nodes[r_idx], r)

    th_sorted = rule.theta_sorted
    t_start = _nearest_window(th_sorted, th, n0)
    t_idx_sorted = t_start[:, None] + np.arange(width)[None, :]
    t_w = _lagrange_weights(th_sorted[t_idx_sorted], th)
    # map back to original (descending-theta) ordering
    t_idx = rule.n_polar - 1 - t_idx_sorted

    ph = np.mod(ph, 2.0 * np.pi)
    dphi = 2.0 * np.pi / nphi
    k_near = np.rint(ph / dphi).astype(int)
    p_idx_raw = k_near[:, None] + np.arange(-n0, n0 + 1)[None, :]
    p_coords = p_idx_raw * dphi
    p_idx = np.mod(p_idx_raw, nphi)
    p_w = _lagrange_weights(p_coords, ph)

    flat = (
        r_idx[:, :, None, None] * (rule.n_polar * nphi)
        + t_idx[:, None, :, None] * nphi
        + p_idx[:, None, None, :]
    ).reshape(m, -1)
    wts = (
        r_w[:, :, None, None] * t_w[:, None, :, None] * p_w[:, None, None, :]
    ).reshape(m, -1)
    return InterpolationStencil(half_width=n0, indices=flat, weights=wts)


def interpolate_ball(
    samples: np.ndarray,
    point_polar,
    half_width: int,
    rule: BallQuadrature,
):
    """Interpolate node samples at (r', theta, phi) points inside the unit ball."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[-1] != len(rule):
        raise ValueError("samples must match the quadrature node count")
    pts = np.asarray(point_polar, dtype=float)
    single = pts.ndim == 1
    st = interpolation_stencil(rule, pts, half_width)
    vals = (samples[st.indices] * st.weights).sum(axis=1)
    return float(vals[0]) if single else vals


def cartesian_to_polar(points: np.ndarray) -> np.ndarray:
    """(x, y, z) rows to (r, theta, phi) rows; phi in [0, 2*pi)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.sqrt((pts**2).sum(axis=1))
    safe = np.where(r > 0, r, 1.0)
    theta = np.arccos(np.clip(pts[:, 2] / safe, -1.0, 1.0))
    phi = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2.0 * np.pi)
    theta = np.where(r > 0, theta, 0.0)
    return np.column_stack((r, theta, phi))
