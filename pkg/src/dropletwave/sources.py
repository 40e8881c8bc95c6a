"""Source models: causal incident fields V and their wave sources J.

A model pairs an analytic field V(x, t) with the source J = c0^{-2} V_tt - Lap V
it generates in the unperturbed medium.  The shipped models are separable,
V(x, t) = g(t) * S(x), which gives exact time derivatives, Laplacians, and
closed forms or cheap one-dimensional quadratures for the oscillatory memory
integrals of the field expansion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import BallQuadrature, boundary_distance, direction


# ---------------------------------------------------------------------------
# time profiles


class TimeProfile:
    """Causal scalar profile g(t) with g = 0 for t <= 0."""

    #: end of the temporal support of g, or None when g never vanishes
    support_end: float | None = None

    def __call__(self, t):
        raise NotImplementedError

    def second_derivative(self, t):
        raise NotImplementedError

    def sin_convolution(self, omega: float, tbar):
        """I(tbar) = int_0^tbar sin(omega (tbar - s)) g(s) ds.

        Generic path: composite Simpson with at least 8 samples per period
        of the oscillatory factor.
        """
        return simpson_sin_convolution(self, omega, tbar)

    def cos_sin_moments(self, omegas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(int cos(w s) g ds, int sin(w s) g ds) over the support, per omega.

        Requires a compactly supported profile; evaluated once with composite
        Gauss-Legendre panels resolving the fastest oscillation.
        """
        if self.support_end is None:
            raise ValueError("moments need a compactly supported profile")
        omegas = np.asarray(omegas, dtype=float)
        wmax = max(float(np.max(omegas)), 1.0)
        panels = max(16, int(np.ceil(self.support_end * wmax / np.pi)))
        x, w = np.polynomial.legendre.leggauss(10)
        edges = np.linspace(0.0, self.support_end, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        s = (mid[:, None] + half * x[None, :]).ravel()
        ws = (half * np.broadcast_to(w, (panels, w.size))).ravel()
        gs = ws * np.asarray(self(s), dtype=float)
        cosm = np.cos(omegas[:, None] * s[None, :]) @ gs
        sinm = np.sin(omegas[:, None] * s[None, :]) @ gs
        return cosm, sinm


def simpson_sin_convolution(profile, omega: float, tbar, max_step: float = 0.1):
    """Composite-Simpson evaluation of int_0^tbar sin(omega (tbar-s)) g(s) ds."""
    tbar_arr = np.atleast_1d(np.asarray(tbar, dtype=float))
    out = np.zeros_like(tbar_arr)
    step = min(max_step, 2.0 * np.pi / (8.0 * max(omega, 1e-300)))
    upper = tbar_arr.copy()
    if profile.support_end is not None:
        upper = np.minimum(upper, profile.support_end)
    for i, (tb, ub) in enumerate(zip(tbar_arr, upper)):
        if ub <= 0.0:
            continue
        n = max(2, int(np.ceil(ub / step)))
        n += n % 2
        s = np.linspace(0.0, ub, n + 1)
        f = np.sin(omega * (tb - s)) * np.asarray(profile(s), dtype=float)
        h = ub / n
        out[i] = h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())
    return out if np.ndim(tbar) else float(out[0])


@dataclass
class MonomialProfile(TimeProfile):
    """g(t) = t^p for t > 0; the memory integral has an exact recursion."""

    p: int
    support_end = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t > 0.0, t, 0.0) ** self.p

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        p = self.p
        if p < 2:
            return np.zeros_like(t)
        return p * (p - 1) * np.where(t > 0.0, t, 0.0) ** (p - 2)

    def sin_convolution(self, omega: float, tbar):
        tb = np.asarray(tbar, dtype=float)
        tb = np.where(tb > 0.0, tb, 0.0)
        # F_p = tb^p/w - p (p-1) F_{p-2} / w^2, F_0 and F_1 in closed form
        f_even = (1.0 - np.cos(omega * tb)) / omega
        f_odd = tb / omega - np.sin(omega * tb) / omega**2
        f = [f_even, f_odd]
        for p in range(2, self.p + 1):
            f.append(tb**p / omega - p * (p - 1) * f[p - 2] / omega**2)
        return f[self.p]


@dataclass
class ConstantProfile(TimeProfile):
    """g(t) = 1 for t > 0 (test profile; exact memory integral)."""

    support_end = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (t > 0.0).astype(float)

    def second_derivative(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def sin_convolution(self, omega: float, tbar):
        tb = np.asarray(tbar, dtype=float)
        tb = np.where(tb > 0.0, tb, 0.0)
        return (1.0 - np.cos(omega * tb)) / omega


@dataclass
class SineWindowProfile(TimeProfile):
    """g(t) = amp * sin(t)^3 * sin(wind*(t - T))^2 on (0, T), zero outside."""

    duration: float
    amplitude: float = 10.0
    wind: float = 2.0

    def __post_init__(self):
        self.support_end = self.duration
        self._moment_cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0.0) & (t < self.duration)
        out = np.zeros_like(t)
        ti = t[inside]
        out[inside] = (
            self.amplitude * np.sin(ti) ** 3 * np.sin(self.wind * (ti - self.duration)) ** 2
        )
        return out

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0.0) & (t < self.duration)
        out = np.zeros_like(t)
        ti = t[inside]
        w = self.wind
        u = np.sin(ti) ** 3
        du = 3.0 * np.sin(ti) ** 2 * np.cos(ti)
        d2u = 6.0 * np.sin(ti) * np.cos(ti) ** 2 - 3.0 * np.sin(ti) ** 3
        arg = w * (ti - self.duration)
        v = np.sin(arg) ** 2
        dv = w * np.sin(2.0 * arg)
        d2v = 2.0 * w * w * np.cos(2.0 * arg)
        out[inside] = self.amplitude * (d2u * v + 2.0 * du * dv + u * d2v)
        return out

    def sin_convolution(self, omega: float, tbar):
        tb = np.asarray(tbar, dtype=float)
        if np.all(tb >= self.duration):
            key = float(omega)
            if key not in self._moment_cache:
                self._moment_cache[key] = self.cos_sin_moments(np.array([omega]))
            cosm, sinm = self._moment_cache[key]
            out = np.sin(omega * tb) * cosm[0] - np.cos(omega * tb) * sinm[0]
            return float(out) if np.ndim(tbar) == 0 else out
        return simpson_sin_convolution(self, omega, tbar)


# ---------------------------------------------------------------------------
# space profiles


class SpaceProfile:
    def __call__(self, x):
        raise NotImplementedError

    def laplacian(self, x):
        raise NotImplementedError


class GaussPlusLinearSpace(SpaceProfile):
    """S = exp(r^2) + 3 x2 + x3 on the unit ball."""

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r2 = (x**2).sum(axis=1)
        return np.exp(r2) + 3.0 * x[:, 1] + x[:, 2]

    def laplacian(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r2 = (x**2).sum(axis=1)
        return (6.0 + 4.0 * r2) * np.exp(r2)


class CubicWellSpace(SpaceProfile):
    """S = (s0 - r^2) (exp(s0 - r^2) + 2 x2 + x3) with s0 = 0.16."""

    s0 = 0.16

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        phi = self.s0 - (x**2).sum(axis=1)
        return phi * (np.exp(phi) + 2.0 * x[:, 1] + x[:, 2])

    def laplacian(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r2 = (x**2).sum(axis=1)
        phi = self.s0 - r2
        lin = 2.0 * x[:, 1] + x[:, 2]
        return np.exp(phi) * (4.0 * r2 * (2.0 + phi) - 6.0 * (1.0 + phi)) - 10.0 * lin


@dataclass
class RadialBumpSpace(SpaceProfile):
    """psi = (R^2 - r^2)^k inside radius R, zero outside (C^{k-1} matching)."""

    radius: float = 0.8
    power: int = 4

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        gap = self.radius**2 - (x**2).sum(axis=1)
        return np.where(gap > 0.0, gap, 0.0) ** self.power

    def laplacian(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r2 = (x**2).sum(axis=1)
        gap = np.where(self.radius**2 - r2 > 0.0, self.radius**2 - r2, 0.0)
        k = self.power
        return -6.0 * k * gap ** (k - 1) + 4.0 * k * (k - 1) * r2 * gap ** (k - 2)


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class BallDomain:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))

    def max_distance(self, z) -> float:
        z = np.asarray(z, dtype=float)
        return float(np.linalg.norm(z - self.center)) + self.radius


@dataclass(frozen=True)
class BoxDomain:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=float))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=float))

    def max_distance(self, z) -> float:
        z = np.asarray(z, dtype=float)
        corners = np.stack(
            np.meshgrid(*zip(self.lo, self.hi), indexing="ij"), axis=-1
        ).reshape(-1, 3)
        return float(np.max(np.linalg.norm(corners - z, axis=1)))


# ---------------------------------------------------------------------------
# source models


@dataclass
class SeparableSource:
    """V(x, t) = g(t) S(x) with the matching source J = c0^{-2} V_tt - Lap V."""

    space: SpaceProfile
    time: TimeProfile
    domain: BallDomain | BoxDomain
    c0: float = 1.0

    @property
    def v_support_end(self) -> float | None:
        """Time after which V(z, .) vanishes identically, if finite."""
        return self.time.support_end

    def incident(self, x, t):
        s = self.space(x)
        g = np.asarray(self.time(t), dtype=float)
        out = g * s
        return float(out[0]) if (np.ndim(x) == 1 and np.ndim(t) == 0) else out

    def incident_tt(self, x, t):
        out = np.asarray(self.time.second_derivative(t), dtype=float) * self.space(x)
        return float(out[0]) if (np.ndim(x) == 1 and np.ndim(t) == 0) else out

    def laplacian_incident(self, x, t):
        out = np.asarray(self.time(t), dtype=float) * self.space.laplacian(x)
        return float(out[0]) if (np.ndim(x) == 1 and np.ndim(t) == 0) else out

    def source(self, x, t):
        g = np.asarray(self.time(t), dtype=float)
        gtt = np.asarray(self.time.second_derivative(t), dtype=float)
        out = gtt / self.c0**2 * self.space(x) - g * self.space.laplacian(x)
        return float(out[0]) if (np.ndim(x) == 1 and np.ndim(t) == 0) else out


def example_41_source(p: int = 4, c0: float = 1.0) -> SeparableSource:
    """Spherical-domain field t^p (exp(r^2) + 3 x2 + x3) on Omega = B(0, 1)."""
    if p < 2:
        raise ValueError("temporal degree must be >= 2")
    return SeparableSource(
        space=GaussPlusLinearSpace(),
        time=MonomialProfile(p),
        domain=BallDomain(center=np.zeros(3), radius=1.0),
        c0=c0,
    )


def example_42_source(duration: float = 1.0, c0: float = 1.0) -> SeparableSource:
    """Cubic-domain field with a smooth onset and compact temporal support."""
    half = 0.25
    return SeparableSource(
        space=CubicWellSpace(),
        time=SineWindowProfile(duration=duration),
        domain=BoxDomain(lo=-half * np.ones(3), hi=half * np.ones(3)),
        c0=c0,
    )


def manufactured_bump_source(
    radius: float = 0.8, power: int = 4, degree: int = 3, c0: float = 1.0
) -> SeparableSource:
    """Compactly supported pair (V, J) with V equal to the potential of J.

    V = (R^2 - r^2)^k t^p solves the wave equation with the analytic J, so the
    retarded volume potential of J reproduces V; used to cross-check the
    potential evaluation path.
    """
    return SeparableSource(
        space=RadialBumpSpace(radius=radius, power=power),
        time=MonomialProfile(degree),
        domain=BallDomain(center=np.zeros(3), radius=radius),
        c0=c0,
    )


def retarded_potential(model: SeparableSource, x, t: float, rule: BallQuadrature):
    """V(x, t) as the retarded volume potential of J over a spherical domain.

    Cross-check path: inside the domain the weak singularity is removed by
    the x-centered polar rewrite, outside the plain ball rule applies.
    """
    if not isinstance(model.domain, BallDomain):
        raise ValueError("potential path supports spherical domains only")
    x = np.asarray(x, dtype=float)
    c0 = model.c0
    center, radius = model.domain.center, model.domain.radius
    xc = x - center
    if xc @ xc < radius**2:
        th = rule.theta_nodes[:, None]
        ph = rule.phi_nodes[None, :]
        rb = boundary_distance(xc, th, ph, radius)
        dirs = direction(th, ph)
        y = x[None, None, None, :] + rule.r_nodes[:, None, None, None] * (
            rb[None, :, :, None] * dirs[None, :, :, :]
        )
        lag = rule.r_nodes[:, None, None] * rb[None, :, :] / c0
        w = (
            (rule.r_weights * rule.r_nodes)[:, None, None]
            * rule.sphere_weights[None, :, None]
            * rb[None, :, :] ** 2
            / (4.0 * np.pi)
        )
        vals = model.source(y.reshape(-1, 3), (t - lag).ravel())
        return float((w.ravel() * vals).sum())
    y = center[None, :] + radius * rule.nodes
    dist = np.linalg.norm(y - x[None, :], axis=1)
    vals = model.source(y, t - dist / c0)
    return float((radius**3 * rule.weights / (4.0 * np.pi * dist) * vals).sum())


def incident_field(model, x, t, path: str = "analytic", rule: BallQuadrature | None = None):
    """Incident field V; ``path='potential'`` integrates J instead (cross-check)."""
    if path == "analytic":
        return model.incident(x, t)
    if path == "potential":
        if rule is None:
            raise ValueError("potential path needs a ball quadrature rule")
        return retarded_potential(model, x, float(t), rule)
    raise ValueError(f"unknown incident-field path {path!r}")
