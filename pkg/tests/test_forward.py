import numpy as np
import pytest

from dropletwave.forward import LseOperator, exterior_field, scattered_field, solve_lse
from dropletwave.quadrature import ball_quadrature
from dropletwave.sources import example_41_source
from dropletwave.spectrum import Droplet
from dropletwave.splines import build_spline_basis

C0 = 1.0
CENTER = np.array([-0.2, 0.0, 0.0])


@pytest.fixture(scope="module")
def small_rule():
    return ball_quadrature(6, 5)


@pytest.fixture(scope="module")
def basis():
    return build_spline_basis(2, 0.1)


@pytest.fixture(scope="module")
def operator(small_rule, basis):
    droplet = Droplet(center=CENTER, radius=0.05, riesz_b=4 * np.pi, c0=C0)
    return LseOperator(droplet, small_rule, basis)


class TestInteriorMarch:
    def test_zero_contrast_decouples(self, small_rule, basis):
        # b = pi c0 / a gives c1 = c0 and chi1 = 0, so U = V identically
        droplet = Droplet(center=CENTER, radius=0.05, riesz_b=np.pi / 0.05, c0=C0)
        model = example_41_source(p=3, c0=C0)
        history = solve_lse(model, droplet, small_rule, basis, horizon=2.0)
        v = np.array(
            [model.incident(history.nodes, l * 0.1) for l in range(history.values.shape[0])]
        )
        assert np.abs(history.values - v).max() == 0.0

    def test_initial_row_is_incident(self, operator):
        model = example_41_source(p=4, c0=C0)
        history = operator.march(model, 1.0)
        assert np.array_equal(history.values[0], model.incident(history.nodes, 0.0))
        assert np.abs(history.values[0]).max() == 0.0

    def test_linearity(self, operator):
        model = example_41_source(p=4, c0=C0)

        class Doubled:
            c0 = C0

            def incident(self, x, t):
                return 2.0 * model.incident(x, t)

        h1 = operator.march(model, 2.0)
        h2 = operator.march(Doubled(), 2.0)
        scale = np.abs(h2.values).max()
        assert np.abs(2.0 * h1.values - h2.values).max() <= 1e-10 * scale

    def test_factorization_reused_and_kernels_immutable(self, small_rule, basis):
        droplet = Droplet(center=CENTER, radius=0.05, riesz_b=4 * np.pi, c0=C0)
        op = LseOperator(droplet, small_rule, basis)
        snap = op._proj_kernels.copy()
        lu_before = op._lu
        model = example_41_source(p=3, c0=C0)
        op.march(model, 2.0)
        op.march(model, 1.5)
        assert op._lu is lu_before
        assert np.array_equal(op._proj_kernels, snap)

    def test_dense_and_projected_assembly_agree(self, small_rule, basis):
        # the raw dense kernels projected onto the modal basis must equal the
        # directly assembled projected kernels
        droplet = Droplet(center=CENTER, radius=0.05, riesz_b=4 * np.pi, c0=C0)
        dense = LseOperator(droplet, small_rule, basis, modal_span=None)
        proj = LseOperator(droplet, small_rule, basis)
        l_max, j_max = proj.modal_span
        from dropletwave.spectrum import eigenfunction_value, make_mode

        cols = [
            eigenfunction_value(make_mode(l, m, j, droplet), proj.nodes)
            for l in range(l_max + 1)
            for m in range(-l, l + 1)
            for j in range(1, j_max + 1)
        ]
        e_mat = np.array(cols).T * droplet.radius**1.5
        for lag in range(len(dense.kernels)):
            want = dense.kernels[lag] @ e_mat
            assert np.allclose(proj._proj_kernels[lag], want, atol=1e-12)

    def test_speed_mismatch_rejected(self, operator):
        model = example_41_source(p=3, c0=2.0)
        with pytest.raises(ValueError):
            operator.march(model, 1.0)


class TestExterior:
    def test_causality_before_first_arrival(self, operator):
        model = example_41_source(p=4, c0=C0)
        history = operator.march(model, 3.0)
        x = np.array([0.3, 0.4, 0.5])
        arrival = np.linalg.norm(x - CENTER) / C0 - operator.droplet.radius / C0
        scale = np.abs(history.values).max()
        for t in (0.1, 0.4, arrival - 1e-6):
            assert abs(scattered_field(history, x, t)) <= 1e-10 * scale

    def test_exterior_is_incident_plus_scattered(self, operator):
        model = example_41_source(p=4, c0=C0)
        history = operator.march(model, 3.0)
        x = np.array([0.3, 0.4, 0.5])
        t = 2.5
        got = exterior_field(history, model, x, t)
        want = model.incident(x, t) + scattered_field(history, x, t)
        assert got == pytest.approx(want, rel=1e-14)

    def test_interior_point_rejected(self, operator):
        model = example_41_source(p=4, c0=C0)
        history = operator.march(model, 1.0)
        with pytest.raises(ValueError):
            scattered_field(history, CENTER + np.array([0.01, 0, 0]), 0.5)

    def test_horizon_too_short(self, operator):
        model = example_41_source(p=4, c0=C0)
        history = operator.march(model, 1.0)
        with pytest.raises(ValueError):
            scattered_field(history, np.array([0.3, 0.4, 0.5]), 5.0)
