"""Eigensystem of the Newtonian potential operator on a spherical droplet.

The operator N(f)(x) = int_D f(y) / (4 pi |x-y|) dy on a ball of radius a has
eigenvalues a^2/mu^2 with mu running over the positive roots of J_{l-1/2}.
Only the l = 0 modes have nonvanishing averages and feed the field expansion;
modes with l >= 1 exist here to validate the numerical operator application.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import spherical_jn

from .quadrature import BallQuadrature, boundary_distance, cartesian_to_polar, direction
from .special import bessel_half, bessel_root, spherical_harmonic


@dataclass(frozen=True)
class Droplet:
    """Injected spherical inclusion with Riesz parameter b = c1 pi / a."""

    center: np.ndarray
    radius: float
    riesz_b: float
    c0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0.0:
            raise ValueError("droplet radius must be positive")
        if self.riesz_b <= 0.0:
            raise ValueError("Riesz parameter b must be positive")

    @property
    def c1(self) -> float:
        """Interior wave speed, c1 = a b / pi."""
        return self.radius * self.riesz_b / np.pi

    @property
    def chi1(self) -> float:
        """Contrast c0^2/c1^2 - 1 that weights the memory term."""
        return (self.c0 / self.c1) ** 2 - 1.0


@dataclass(frozen=True)
class EigenMode:
    """One eigenpair of the Newtonian operator on the droplet.

    ``avg`` is the signed integral of the normalized eigenfunction over the
    droplet; it vanishes for l >= 1 and alternates in sign with j for l = 0,
    with avg^2 = 8 pi a^3 / mu^4.  ``omega`` = c1/sqrt(lambda) is the memory
    frequency b (j - 1/2) and is only meaningful once a droplet is attached.
    """

    l: int
    m: int
    j: int
    mu: float
    lam: float
    avg: float
    omega: float
    radius: float
    center: np.ndarray = field(repr=False)


def modes_l0(droplet: Droplet, count: int) -> list[EigenMode]:
    """First ``count`` l = 0 modes: mu_j = (j - 1/2) pi, closed-form averages."""
    if count < 1:
        raise ValueError("need at least one mode")
    a = droplet.radius
    modes = []
    for j in range(1, count + 1):
        mu = (j - 0.5) * np.pi
        lam = a * a / mu**2
        avg = (-1.0) ** (j + 1) * 2.0 * np.sqrt(2.0 * np.pi) * a**1.5 / mu**2
        omega = droplet.riesz_b * (j - 0.5)
        modes.append(
            EigenMode(
                l=0, m=0, j=j, mu=mu, lam=lam, avg=avg, omega=omega,
                radius=a, center=droplet.center,
            )
        )
    return modes


def make_mode(l: int, m: int, j: int, droplet: Droplet) -> EigenMode:
    """Eigenmode of arbitrary degree; averages vanish for l >= 1."""
    a = droplet.radius
    mu = bessel_root(l - 0.5, j)
    lam = a * a / mu**2
    if l == 0:
        return modes_l0(droplet, j)[-1]
    return EigenMode(
        l=l, m=m, j=j, mu=mu, lam=lam, avg=0.0,
        omega=droplet.c1 * mu / a, radius=a, center=droplet.center,
    )


def eigenfunction_value(mode: EigenMode, x):
    """Normalized eigenfunction e(x) at physical points inside the droplet.

    Evaluated through the regular spherical-Bessel form, so the l = 0 value
    at the center is the finite limit and l > 0 modes vanish there.
    """
    pts = np.atleast_2d(np.asarray(x, dtype=float)) - mode.center
    polar = cartesian_to_polar(pts)
    r = polar[:, 0]
    a = mode.radius
    if np.any(r > a * (1.0 + 1e-12)):
        raise ValueError("point outside the closed droplet")
    # || (1/sqrt r) J_{l+1/2}(mu r / a) Y ||^2 = (a^2/2) J_{l+1/2}(mu)^2
    norm = a / np.sqrt(2.0) * abs(bessel_half(mode.l + 0.5, mode.mu))
    radial = np.sqrt(2.0 * mode.mu / (np.pi * a)) * spherical_jn(
        mode.l, mode.mu * r / a
    )
    vals = radial * spherical_harmonic(mode.l, mode.m, polar[:, 1], polar[:, 2]) / norm
    return float(vals[0]) if np.ndim(x) == 1 else vals


def apply_newtonian(f, x, droplet: Droplet, rule: BallQuadrature):
    """N(f)(x) = int_D f(y)/(4 pi |x-y|) dy at a point x strictly inside D.

    The integral is rewritten in polar coordinates centered at x, which turns
    the weakly singular kernel into the regular weight r' r_b^2 / (4 pi);
    ``f`` must accept an (m, 3) array of physical points.
    """
    x = np.asarray(x, dtype=float)
    xc = x - droplet.center
    a = droplet.radius
    if xc @ xc >= a * a:
        raise ValueError("apply_newtonian needs x strictly inside the droplet")
    th = rule.theta_nodes[:, None]
    ph = rule.phi_nodes[None, :]
    rb = boundary_distance(xc, th, ph, a)              # (N_s, 2 N_s)
    dirs = direction(th, ph)                           # (N_s, 2 N_s, 3)
    # y = x + r' * r_b * d for each radial node r'
    y = x[None, None, None, :] + rule.r_nodes[:, None, None, None] * (
        rb[None, :, :, None] * dirs[None, :, :, :]
    )
    vals = np.asarray(f(y.reshape(-1, 3)), dtype=float).reshape(y.shape[:3])
    w = (
        (rule.r_weights * rule.r_nodes)[:, None, None]
        * rule.sphere_weights[None, :, None]
        * rb[None, :, :] ** 2
        / (4.0 * np.pi)
    )
    return float((w * vals).sum())


def validation_lattice(radius: float = 0.95, step: float = 2.0 / 19.0) -> np.ndarray:
    """Uniform lattice on [-1, 1]^3 filtered to |x| < radius (3112 points at defaults)."""
    c = np.arange(-1.0, 1.0 + 0.5 * step, step)
    pts = np.stack(np.meshgrid(c, c, c, indexing="ij"), axis=-1).reshape(-1, 3)
    return pts[np.sqrt((pts**2).sum(axis=1)) < radius]


def validate_eigensystem(
    modes: list[EigenMode], points: np.ndarray, rule: BallQuadrature
) -> np.ndarray:
    """Mean |u(x_i) - lambda^{-1} N(u)(x_i)| over the points, per mode.

    The numerical operator application uses the x-centered polar rewrite on
    each evaluation point; the eigenfunctions themselves are analytic.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    acc = np.zeros(len(modes))
    a = modes[0].radius
    center = modes[0].center
    th = rule.theta_nodes[:, None]
    ph = rule.phi_nodes[None, :]
    dirs = direction(th, ph)
    for x in points:
        xc = x - center
        if xc @ xc >= a * a:
            raise ValueError("validation points must lie strictly inside the droplet")
        rb = boundary_distance(xc, th, ph, a)
        y = x[None, None, None, :] + rule.r_nodes[:, None, None, None] * (
            rb[None, :, :, None] * dirs[None, :, :, :]
        )
        w = (
            (rule.r_weights * rule.r_nodes)[:, None, None]
            * rule.sphere_weights[None, :, None]
            * rb[None, :, :] ** 2
            / (4.0 * np.pi)
        ).ravel()
        yf = y.reshape(-1, 3)
        for k, mode in enumerate(modes):
            u_x = eigenfunction_value(mode, x)
            nu = w @ eigenfunction_value(mode, yf)
            acc[k] += abs(u_x - nu / mode.lam)
    return acc / points.shape[0]
