"""Droplet-induced field expansion and measurement synthesis.

The perturbation W(x, t) splits per mode into an instantaneous term
xi_n proportional to V(z, t - |x-z|/c0) and an oscillatory memory term
zeta_n driven by the sin kernel at frequency omega_n = b (n - 1/2);
the two nearly cancel, leaving an O(a/n^2) net contribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .inversion import MeasurementTrace
from .spectrum import Droplet, EigenMode
from .sources import SeparableSource, simpson_sin_convolution


@dataclass(frozen=True)
class ExpansionTerm:
    """Mode contribution to W: instantaneous part xi and memory part zeta."""

    n: int
    xi: float | np.ndarray
    zeta: float | np.ndarray

    @property
    def total(self):
        return self.xi + self.zeta


def _memory_integral(model, z: np.ndarray, omega: float, tbar):
    """int_0^tbar sin(omega (tbar - s)) V(z, s) ds for one droplet position."""
    if isinstance(model, SeparableSource):
        s_z = float(model.space(z[None, :])[0])
        return s_z * model.time.sin_convolution(omega, tbar)

    class _Profile:
        support_end = getattr(model, "v_support_end", None)

        def __call__(self, s):
            return model.incident(z, s)

    return simpson_sin_convolution(_Profile(), omega, tbar)


def expansion_term(
    mode: EigenMode, droplet: Droplet, model, x, t
) -> ExpansionTerm:
    """xi_n and zeta_n at an exterior point x and time(s) t."""
    x = np.asarray(x, dtype=float)
    z = droplet.center
    dist = float(np.linalg.norm(x - z))
    if dist == 0.0:
        raise ValueError("evaluation point coincides with the droplet center")
    tbar = np.asarray(t, dtype=float) - dist / droplet.c0
    avg2 = mode.avg**2
    pref = avg2 / (4.0 * np.pi * dist * mode.lam)
    xi = -pref * np.where(tbar > 0.0, np.asarray(model.incident(z, tbar)), 0.0)
    alpha = mode.omega * pref
    zeta = alpha * np.where(
        tbar > 0.0, _memory_integral(model, z, mode.omega, np.maximum(tbar, 0.0)), 0.0
    )
    if np.ndim(t) == 0:
        return ExpansionTerm(n=mode.j, xi=float(xi), zeta=float(zeta))
    return ExpansionTerm(n=mode.j, xi=xi, zeta=zeta)


def expansion_W_N(
    modes: list[EigenMode], droplet: Droplet, model, x, t, truncation: int | None = None
):
    """Truncated expansion W_N = sum_{n<=N} (xi_n + zeta_n), summed in order."""
    n = truncation if truncation is not None else len(modes)
    if n > len(modes):
        raise ValueError(f"truncation {n} exceeds the {len(modes)} available modes")
    total = np.zeros(np.shape(t)) if np.ndim(t) else 0.0
    for mode in modes[:n]:
        term = expansion_term(mode, droplet, model, x, t)
        total = total + term.total
    return total


def first_arrival_time(droplet: Droplet, x) -> float:
    """Earliest time a wave from the droplet center reaches x."""
    return float(np.linalg.norm(np.asarray(x, dtype=float) - droplet.center)) / droplet.c0


def synthesize_measurement(
    modes: list[EigenMode],
    droplet: Droplet,
    model,
    x_star,
    t_start: float,
    num_samples: int | None = None,
    truncation: int | None = None,
) -> MeasurementTrace:
    """Sample U(x*, t) = W_N(x*, t) on the window [t_start, t_start + 2 pi / b].

    Requires the window to open after the incident field has died out at the
    droplet, t_start > T_J + |x*-z|/c0, so the trace carries the pure memory
    signal.
    """
    n = truncation if truncation is not None else len(modes)
    x_star = np.asarray(x_star, dtype=float)
    v_end = getattr(model, "v_support_end", None)
    if v_end is None:
        raise ValueError(
            "measurement synthesis needs a source with compactly supported V(z, .)"
        )
    travel = first_arrival_time(droplet, x_star)
    if t_start <= v_end + travel:
        raise ValueError(
            f"window start {t_start:g} violates t_start > T_J + |x*-z|/c0 "
            f"= {v_end + travel:g}"
        )
    b = droplet.riesz_b
    duration = 2.0 * np.pi / b
    m = num_samples if num_samples is not None else max(64, 8 * n)
    times = t_start + duration * np.arange(m + 1) / m
    samples = expansion_W_N(modes, droplet, model, x_star, times, n)
    return MeasurementTrace(
        x_star=x_star,
        t_start=t_start,
        duration=duration,
        samples=np.asarray(samples, dtype=float),
    )
