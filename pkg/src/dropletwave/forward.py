"""Time-domain Lippmann-Schwinger solver on the droplet.

The integral equation U + (chi1/c0^2) V_D[U_tt] = V is collocated at the ball
quadrature nodes mapped into the droplet.  Retarded times are expanded in the
convolution-spline basis (second-derivative weights), the weakly singular
volume integral is rewritten in collocation-centered polar coordinates, and
field values at the polar integration points are obtained by tensor-product
Lagrange interpolation from the master grid.

The raw collocation operator admits spurious rough-grid eigenvectors with
negative real part (the interpolation cannot represent them), and the
one-sided small-lag spline weights turn those into exponentially growing
parasites of the time march.  The memory kernels are therefore composed with
a projection onto the span of the analytic Newtonian eigenfunctions the
quadrature resolves; smooth fields pass through the projector at the
discretization's own accuracy, while unresolved components carry no memory
feedback.  The per-step system matrix is time independent and its factored
form (a small dense system through the projector) is reused for every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .quadrature import (
    BallQuadrature,
    boundary_distance,
    cartesian_to_polar,
    direction,
    interpolation_stencil,
)
from .spectrum import Droplet, eigenfunction_value, make_mode
from .splines import SplineBasis


@dataclass
class InteriorHistory:
    """Solution samples U(G(x_i), t_l) on the droplet nodes for every step."""

    droplet: Droplet
    rule: BallQuadrature
    basis: SplineBasis
    values: np.ndarray       # (L+1, N) with row 0 the initial (causal zero) state
    nodes: np.ndarray = field(repr=False)  # (N, 3) physical node images

    @property
    def dt(self) -> float:
        return self.basis.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.shape[0]) * self.dt


def default_modal_span(rule: BallQuadrature) -> tuple[int, int]:
    """Degrees (l_max, j_max) of the memory-filter span the rule resolves.

    The radial Gauss rule orthonormalizes the eigenfunction products only up
    to j ~ N_r - 3 (the Gram matrix degenerates beyond), and the sphere rule
    caps the harmonic degree.
    """
    l_max = max(1, min(3, rule.n_polar // 3))
    j_max = max(2, rule.n_radial - 3)
    return l_max, j_max


class LseOperator:
    """Assembled memory kernels and factored system for one droplet.

    The kernels are stored in projected form K_lag E (node values to node
    values through the modal coefficients), so memory stays linear in the
    node count; ``modal_span=None`` disables the filter and keeps the raw
    dense kernels (subject to the marching instability, small tests only).
    """

    def __init__(
        self,
        droplet: Droplet,
        rule: BallQuadrature,
        basis: SplineBasis,
        half_width: int = 2,
        modal_span: tuple[int, int] | str | None = "auto",
    ):
        self.droplet = droplet
        self.rule = rule
        self.basis = basis
        self.half_width = half_width
        n = len(rule)
        self.nodes = droplet.center[None, :] + droplet.radius * rule.nodes
        if modal_span == "auto":
            modal_span = default_modal_span(rule)
        self.modal_span = modal_span

        if modal_span is None:
            self.kernels = _assemble_lag_kernels(droplet, rule, basis, half_width)
            self._lu = lu_factor(np.eye(n) + self.kernels[0])
            self._coeff_map = None
            self._proj_kernels = None
        else:
            l_max, j_max = modal_span
            cols = [
                eigenfunction_value(make_mode(l, m, j, droplet), self.nodes)
                for l in range(l_max + 1)
                for m in range(-l, l + 1)
                for j in range(1, j_max + 1)
            ]
            basis_mat = np.array(cols).T * droplet.radius**1.5
            gram = basis_mat.T @ (rule.weights[:, None] * basis_mat)
            if np.linalg.cond(gram) > 1e8:
                raise ValueError(
                    f"modal span {modal_span} exceeds what the ball rule "
                    f"({rule.n_radial}, {rule.n_polar}) can orthonormalize; "
                    "reduce l_max/j_max"
                )
            # coefficient extraction B with E B = modal projector
            self._coeff_map = np.linalg.solve(
                gram, basis_mat.T * rule.weights[None, :]
            )
            self._proj_kernels = _assemble_projected_kernels(
                droplet, rule, basis, half_width, basis_mat
            )
            nm = basis_mat.shape[1]
            self._lu = lu_factor(
                np.eye(nm) + self._coeff_map @ self._proj_kernels[0]
            )
            self.kernels = None

    @property
    def history_depth(self) -> int:
        k = self.kernels if self.kernels is not None else self._proj_kernels
        return len(k) - 1

    def _solve_step(self, rhs: np.ndarray) -> np.ndarray:
        if self._coeff_map is None:
            return lu_solve(self._lu, rhs)
        # Woodbury: (I + K0 E B) u = rhs
        z = lu_solve(self._lu, self._coeff_map @ rhs)
        return rhs - self._proj_kernels[0] @ z

    def march(self, model, horizon: float) -> InteriorHistory:
        """March the interior solution to the given time horizon."""
        droplet = self.droplet
        if getattr(model, "c0", droplet.c0) != droplet.c0:
            raise ValueError("model and droplet assume different background speeds")
        dt = self.basis.dt
        steps = int(np.floor(horizon / dt + 1e-12))
        nodes = self.nodes
        n = len(self.rule)
        depth = self.history_depth
        u = np.zeros((steps + 1, n))
        u[0] = model.incident(nodes, 0.0)
        coeffs = None
        if self._coeff_map is not None:
            coeffs = np.zeros((steps + 1, self._coeff_map.shape[0]))
            coeffs[0] = self._coeff_map @ u[0]
        for l in range(1, steps + 1):
            rhs = np.asarray(model.incident(nodes, l * dt), dtype=float).copy()
            for lag in range(1, min(depth, l - 1) + 1):
                if coeffs is None:
                    rhs -= self.kernels[lag] @ u[l - lag]
                else:
                    rhs -= self._proj_kernels[lag] @ coeffs[l - lag]
            u[l] = self._solve_step(rhs)
            if coeffs is not None:
                coeffs[l] = self._coeff_map @ u[l]
        return InteriorHistory(
            droplet=droplet, rule=self.rule, basis=self.basis, values=u, nodes=nodes
        )


def _node_geometry(droplet: Droplet, rule: BallQuadrature, i: int, th, ph, dirs):
    """Polar quadrature geometry around collocation node i (droplet-local)."""
    a, c0 = droplet.radius, droplet.c0
    xc = a * rule.nodes[i]
    rb = boundary_distance(xc, th, ph, a)
    r = rule.r_nodes
    y = xc[None, None, None, :] + r[:, None, None, None] * (
        rb[None, :, :, None] * dirs[None, :, :, :]
    )
    lag = (r[:, None, None] * rb[None, :, :] / c0).ravel()
    base_w = (
        (droplet.chi1 / c0**2)
        * (rule.r_weights * r)[:, None, None]
        * rule.sphere_weights[None, :, None]
        / (4.0 * np.pi)
    )
    w = (base_w * rb[None, :, :] ** 2).ravel()
    return y.reshape(-1, 3), lag, w


def _assemble_lag_kernels(
    droplet: Droplet, rule: BallQuadrature, basis: SplineBasis, half_width: int
) -> np.ndarray:
    """Raw lag kernel stack K of shape (depth+1, N, N).

    Row i of K[lag] maps nodal values U^{l-lag} to the collocated discrete
    volume integral (chi1/c0^2) V_D[U_tt] at node i.
    """
    n = len(rule)
    th = rule.theta_nodes[:, None]
    ph = rule.phi_nodes[None, :]
    dirs = direction(th, ph)
    depth = basis.max_node_index(2.0 * droplet.radius / droplet.c0)
    kernels = np.zeros((depth + 1, n, n))
    for i in range(n):
        y, lag, w = _node_geometry(droplet, rule, i, th, ph, dirs)
        st = interpolation_stencil(rule, cartesian_to_polar(y / droplet.radius), half_width)
        sidx, sw = basis.weights(lag, derivative=2)
        vals = (w[:, None] * sw)[:, :, None] * st.weights[:, None, :]
        keys = sidx[:, :, None] * n + st.indices[:, None, :]
        kernels[:, i, :] = np.bincount(
            keys.ravel(), weights=vals.ravel(), minlength=(depth + 1) * n
        ).reshape(depth + 1, n)
    return kernels


def _assemble_projected_kernels(
    droplet: Droplet,
    rule: BallQuadrature,
    basis: SplineBasis,
    half_width: int,
    basis_mat: np.ndarray,
) -> np.ndarray:
    """Kernel stack in projected form, (depth+1, N, nm) with entries K_lag E."""
    n = len(rule)
    nm = basis_mat.shape[1]
    th = rule.theta_nodes[:, None]
    ph = rule.phi_nodes[None, :]
    dirs = direction(th, ph)
    depth = basis.max_node_index(2.0 * droplet.radius / droplet.c0)
    out = np.zeros((depth + 1, n, nm))
    chunk_rows: list[np.ndarray] = []
    chunk_idx: list[int] = []

    def flush():
        if not chunk_idx:
            return
        block = np.stack(chunk_rows)                  # (c, depth+1, n)
        proj = block.reshape(-1, n) @ basis_mat       # (c*(depth+1), nm)
        out[:, chunk_idx, :] = proj.reshape(len(chunk_idx), depth + 1, nm).swapaxes(0, 1)
        chunk_rows.clear()
        chunk_idx.clear()

    for i in range(n):
        y, lag, w = _node_geometry(droplet, rule, i, th, ph, dirs)
        st = interpolation_stencil(rule, cartesian_to_polar(y / droplet.radius), half_width)
        sidx, sw = basis.weights(lag, derivative=2)
        vals = (w[:, None] * sw)[:, :, None] * st.weights[:, None, :]
        keys = sidx[:, :, None] * n + st.indices[:, None, :]
        chunk_rows.append(
            np.bincount(
                keys.ravel(), weights=vals.ravel(), minlength=(depth + 1) * n
            ).reshape(depth + 1, n)
        )
        chunk_idx.append(i)
        if len(chunk_idx) == 64:
            flush()
    flush()
    return out


def solve_lse(
    model,
    droplet: Droplet,
    rule: BallQuadrature,
    basis: SplineBasis,
    horizon: float,
    half_width: int = 2,
    operator: LseOperator | None = None,
) -> InteriorHistory:
    """Solve the interior Lippmann-Schwinger equation up to ``horizon``.

    Pass a prebuilt ``operator`` to reuse the assembled kernels across source
    models sharing the droplet and discretization.
    """
    if operator is None:
        operator = LseOperator(droplet, rule, basis, half_width)
    return operator.march(model, horizon)


def scattered_field(history: InteriorHistory, x, t):
    """Droplet-induced perturbation W = U - V at an exterior point.

    Evaluates the retarded node sum with spline second-derivative weights at
    the sub-step offsets d_i; vanishes identically before the first arrival.
    """
    droplet = history.droplet
    x = np.asarray(x, dtype=float)
    sep = x - droplet.center
    if sep @ sep <= droplet.radius**2:
        raise ValueError("scattered field is evaluated outside the droplet")
    c0 = droplet.c0
    dt = history.dt
    u = history.values
    horizon_steps = u.shape[0] - 1
    dist = np.linalg.norm(x[None, :] - history.nodes, axis=1)
    pref = -droplet.chi1 * droplet.radius**3 / c0**2
    node_w = history.rule.weights / (4.0 * np.pi * dist)

    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t_arr)
    for k, tk in enumerate(t_arr):
        tret = tk - dist / c0
        active = tret > 0.0
        if not np.any(active):
            continue
        n_i = np.floor(tret[active] / dt).astype(int) + 1
        d_i = n_i * dt - tret[active]
        if np.any(n_i > horizon_steps):
            raise ValueError(
                "interior history too short for the requested evaluation time"
            )
        sidx, sw = history.basis.weights(d_i, derivative=2)
        uidx = n_i[:, None] - sidx
        valid = uidx >= 0
        uvals = u[np.clip(uidx, 0, horizon_steps), np.nonzero(active)[0][:, None]]
        vals = np.where(valid, uvals, 0.0)
        out[k] = pref * (node_w[active] * (sw * vals).sum(axis=1)).sum()
    return float(out[0]) if np.ndim(t) == 0 else out


def exterior_field(history: InteriorHistory, model, x, t):
    """Total field U = V + W at an exterior point."""
    return model.incident(x, t) + scattered_field(history, x, t)
