"""Field recovery from single-point traces and source assembly.

A trace of U at one receiver over a window of length 2 pi / b determines the
coefficients of V(z, .) in the half-integer trigonometric family
{cos(omega_n t), sin(omega_n t)}, omega_n = b (n - 1/2), which is orthogonal
over the window.  Differentiation of the reconstructed field is stabilized by
convolving twice with the derivative of a compactly supported bump.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from .spectrum import Droplet, EigenMode


@dataclass(frozen=True)
class MeasurementTrace:
    """Uniform samples of U(x*, t) on [t_start, t_start + duration]."""

    x_star: np.ndarray
    t_start: float
    duration: float
    samples: np.ndarray
    noise_kind: str | None = None
    noise_level: float | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "x_star", np.asarray(self.x_star, dtype=float))
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))

    @property
    def times(self) -> np.ndarray:
        m = self.samples.size - 1
        return self.t_start + self.duration * np.arange(m + 1) / m

    @property
    def step(self) -> float:
        return self.duration / (self.samples.size - 1)


@dataclass(frozen=True)
class RieszCoefficients:
    """Per-mode data (A_n, B_n) and rotated window coefficients (C_n, D_n)."""

    omega: np.ndarray
    alpha: np.ndarray
    a_raw: np.ndarray
    b_raw: np.ndarray
    c: np.ndarray
    d: np.ndarray
    riesz_b: float

    @property
    def truncation(self) -> int:
        return self.omega.size


def _trapezoid_weights(m: int, step: float) -> np.ndarray:
    w = np.full(m + 1, step)
    w[0] = w[-1] = 0.5 * step
    return w


def riesz_coefficients(
    trace: MeasurementTrace,
    droplet: Droplet,
    modes: list[EigenMode],
    truncation: int | None = None,
) -> RieszCoefficients:
    """Extract (A_n, B_n) from the trace and rotate them into (C_n, D_n).

    A_n and B_n are trapezoid quadratures of the trace against
    sin(omega_n (s - pi/b)) and cos(omega_n (s - pi/b)), scaled by
    b / (pi alpha_n) with alpha_n = omega_n avg_n^2 / (4 pi |x*-z| lambda_n).
    """
    n = truncation if truncation is not None else len(modes)
    if n < 1 or n > len(modes):
        raise ValueError(f"invalid truncation {n} for {len(modes)} modes")
    b = droplet.riesz_b
    if abs(trace.duration - 2.0 * np.pi / b) > 1e-9 * trace.duration:
        raise ValueError(
            f"trace duration {trace.duration:g} does not match 2 pi / b = "
            f"{2.0 * np.pi / b:g}"
        )
    dist = float(np.linalg.norm(trace.x_star - droplet.center))
    omega = np.array([m.omega for m in modes[:n]])
    avg2 = np.array([m.avg**2 for m in modes[:n]])
    lam = np.array([m.lam for m in modes[:n]])
    alpha = omega * avg2 / (4.0 * np.pi * dist * lam)
    if np.any(alpha == 0.0):
        raise ValueError("vanishing mode average; only l = 0 modes are invertible")

    m_int = trace.samples.size - 1
    s = trace.duration * np.arange(m_int + 1) / m_int
    v = s - np.pi / b
    w = _trapezoid_weights(m_int, trace.step)
    wu = w * trace.samples
    a_raw = b / (np.pi * alpha) * (np.sin(omega[:, None] * v[None, :]) @ wu)
    b_raw = -b / (np.pi * alpha) * (np.cos(omega[:, None] * v[None, :]) @ wu)
    phase = omega * (trace.t_start - dist / droplet.c0)
    cos_p, sin_p = np.cos(phase), np.sin(phase)
    return RieszCoefficients(
        omega=omega,
        alpha=alpha,
        a_raw=a_raw,
        b_raw=b_raw,
        c=cos_p * a_raw - sin_p * b_raw,
        d=sin_p * a_raw + cos_p * b_raw,
        riesz_b=b,
    )


def reconstruct_V(coeffs: RieszCoefficients, t):
    """Riesz sum V_N(z, t) on the window [0, 2 pi / b]."""
    b = coeffs.riesz_b
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < -1e-12) or np.any(t_arr > 2.0 * np.pi / b + 1e-12):
        raise ValueError("reconstruction time outside [0, 2 pi / b]")
    arg = coeffs.omega[:, None] * (t_arr[None, :] - np.pi / b)
    vals = b / np.pi * (coeffs.c @ np.cos(arg) + coeffs.d @ np.sin(arg))
    return float(vals[0]) if np.ndim(t) == 0 else vals


def choose_truncation(delta: float, a: float) -> tuple[int, float]:
    """Stability-driven truncation N ~ (delta/a + a)^{-1/6} and its error order."""
    if delta < 0 or a <= 0:
        raise ValueError("need delta >= 0 and a > 0")
    level = delta / a + a
    n = max(1, int(round(level ** (-1.0 / 6.0))))
    return n, level ** (2.0 / 3.0)


# ---------------------------------------------------------------------------
# mollified differentiation

_BUMP_MASS = quad(lambda x: np.exp(1.0 / (x * x - 1.0)), -1.0, 1.0, epsabs=1e-14)[0]


def bump(x):
    """Normalized mollifier eta with unit mass and support [-1, 1]."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(1.0 / (x[inside] ** 2 - 1.0)) / _BUMP_MASS
    return out


def mollifier_kernel(eps: float, dtau: float, derivative: int = 1) -> np.ndarray:
    """Trapezoid samples of eta_eps (or eta_eps') as a discrete filter.

    Requires eps = (n_t + 1) dtau for an integer n_t >= 1; entries are indexed
    k = -n_t .. n_t (the endpoints +/-(n_t+1) carry zero kernel values), so one
    convolution pass shrinks the series by n_t per side.
    """
    ratio = eps / dtau - 1.0
    n_t = int(round(ratio))
    if n_t < 1 or abs(ratio - n_t) > 1e-9:
        raise ValueError(f"eps = {eps:g} is not (n_t + 1) * dtau for integer n_t >= 1")
    k = np.arange(-n_t, n_t + 1)
    u = k * dtau / eps
    eta = bump(u)
    if derivative == 0:
        return dtau / eps * eta
    if derivative == 1:
        # filter at k approximates f'(x) via sum_k f(x + k dtau) eta_eps'(-k dtau)
        return dtau / eps**2 * eta * 2.0 * u / (u * u - 1.0) ** 2
    raise ValueError("derivative must be 0 or 1")


def convolve_axis(values: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    """Valid-mode correlation along one axis; output is shorter by len-1."""
    arr = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    width = kernel.size
    n = arr.shape[-1]
    if n < width:
        raise ValueError("series too short for the mollification window")
    out = np.zeros(arr.shape[:-1] + (n - width + 1,))
    for j in range(width):
        out += kernel[j] * arr[..., j : n - width + 1 + j]
    return np.moveaxis(out, -1, axis)


def mollified_derivative(samples: np.ndarray, dtau: float, eps: float, axis: int = -1):
    """One mollified differentiation pass; shrinks the axis by n_t per side."""
    return convolve_axis(samples, mollifier_kernel(eps, dtau, derivative=1), axis)


def mollified_second_derivative(
    samples: np.ndarray, dtau: float, eps: float, axis: int = -1
):
    """Two mollified differentiation passes with the same parameters.

    The usable domain shrinks by 2 n_t samples on each side of the axis.
    """
    return mollified_derivative(
        mollified_derivative(samples, dtau, eps, axis), dtau, eps, axis
    )


def mollification_epsilon(delta_f: float, m2: float) -> float:
    """Error-minimizing radius (2 delta / (3 sqrt(pi) M2))^{1/2}."""
    if delta_f < 0 or m2 <= 0:
        raise ValueError("need delta_f >= 0 and M2 > 0")
    return float(np.sqrt(2.0 * delta_f / (3.0 * np.sqrt(np.pi) * m2)))


# ---------------------------------------------------------------------------
# source assembly on a reconstruction lattice


@dataclass(frozen=True)
class ReconstructedField:
    """V_N(z_i, t) on a uniform spatial lattice times a uniform time grid."""

    axes: tuple[np.ndarray, np.ndarray, np.ndarray]
    times: np.ndarray
    values: np.ndarray          # (n1, n2, n3, nt)
    dx: float
    dtau: float
    truncation: int = 0

    def __post_init__(self):
        expected = tuple(len(ax) for ax in self.axes) + (len(self.times),)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != grid {expected}")


@dataclass(frozen=True)
class SourceAssembly:
    """Reconstructed J = c0^{-2} V_tt - Lap V on the mollification-shrunken grid."""

    axes: tuple[np.ndarray, np.ndarray, np.ndarray]
    times: np.ndarray
    values: np.ndarray
    vtt: np.ndarray
    margin: int                  # samples removed per side and axis (2 n_t)


def assemble_source(
    fieldgrid: ReconstructedField, c0: float, eps: float, dtau: float
) -> SourceAssembly:
    """Second derivatives by double mollified differentiation, then J.

    The time step must equal the lattice spacing (the kernel is shared), and
    every axis must survive the 2 n_t per-side shrink of its own double pass.
    """
    if abs(fieldgrid.dx - dtau) > 1e-12:
        raise ValueError("assemble_source expects dtau = dx")
    if abs(fieldgrid.dtau - dtau) > 1e-12:
        raise ValueError("field time grid step differs from dtau")
    kernel = mollifier_kernel(eps, dtau, derivative=1)
    n_t = (kernel.size - 1) // 2
    margin = 2 * n_t
    shape = fieldgrid.values.shape
    for ax in range(4):
        if shape[ax] <= 2 * margin:
            raise ValueError(
                f"axis {ax} with {shape[ax]} samples cannot absorb a "
                f"{margin}-per-side mollification shrink"
            )

    def crop(arr: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
        sl = [slice(None)] * arr.ndim
        for ax in axes:
            sl[ax] = slice(margin, arr.shape[ax] - margin)
        return arr[tuple(sl)]

    deriv2 = lambda arr, ax: convolve_axis(convolve_axis(arr, kernel, ax), kernel, ax)
    vtt = crop(deriv2(fieldgrid.values, 3), (0, 1, 2))
    lap = (
        crop(deriv2(fieldgrid.values, 0), (1, 2, 3))
        + crop(deriv2(fieldgrid.values, 1), (0, 2, 3))
        + crop(deriv2(fieldgrid.values, 2), (0, 1, 3))
    )
    return SourceAssembly(
        axes=tuple(ax[margin:-margin] for ax in fieldgrid.axes),
        times=fieldgrid.times[margin:-margin],
        values=vtt / c0**2 - lap,
        vtt=vtt,
        margin=margin,
    )
