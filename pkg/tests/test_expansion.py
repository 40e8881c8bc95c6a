import numpy as np
import pytest

from dropletwave.expansion import (
    expansion_W_N,
    expansion_term,
    first_arrival_time,
    synthesize_measurement,
)
from dropletwave.sources import (
    ConstantProfile,
    SeparableSource,
    BallDomain,
    example_41_source,
    example_42_source,
)
from dropletwave.spectrum import Droplet, modes_l0


class UnitSpace:
    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.ones(x.shape[0])

    def laplacian(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.zeros(x.shape[0])


@pytest.fixture(scope="module")
def droplet():
    return Droplet(center=np.array([-0.2, 0.0, 0.0]), radius=0.05, riesz_b=4 * np.pi)


@pytest.fixture(scope="module")
def modes(droplet):
    return modes_l0(droplet, 24)


X_EVAL = np.array([0.3, 0.4, 0.5])


class TestExpansionTerm:
    def test_causal_zero(self, droplet, modes):
        model = example_41_source(p=4)
        term = expansion_term(modes[0], droplet, model, X_EVAL, 0.3)
        assert term.xi == 0.0 and term.zeta == 0.0

    def test_step_source_memory_closed_form(self, droplet, modes):
        # V == 1 after t = 0: the memory integral reduces to (1 - cos)/omega
        model = SeparableSource(
            space=UnitSpace(), time=ConstantProfile(), domain=BallDomain(np.zeros(3), 1.0)
        )
        mode = modes[2]
        t = 2.1
        dist = np.linalg.norm(X_EVAL - droplet.center)
        tbar = t - dist
        term = expansion_term(mode, droplet, model, X_EVAL, t)
        alpha = mode.omega * mode.avg**2 / (4 * np.pi * dist * mode.lam)
        want = alpha * (1 - np.cos(mode.omega * tbar)) / mode.omega
        assert term.zeta == pytest.approx(want, rel=1e-8)

    def test_xi_decay_in_mode_index(self, droplet, modes):
        model = example_41_source(p=4)
        t = 3.0
        xis = np.array(
            [abs(expansion_term(m, droplet, model, X_EVAL, t).xi) for m in modes[:20]]
        )
        n = np.arange(1, 21)
        c = xis[0] * 1.0**2  # fit C at n = 1
        assert np.all(xis <= c / n**2 * (1 + 1e-9))

    def test_instantaneous_sum_limit(self, droplet, modes):
        # summed over all modes the xi's give -(a/|x-z|) V(z, t - |x-z|/c0);
        # the N = 20 partial sum carries the known tail fraction
        # sum_{n>20} (n-1/2)^{-2} / (pi^2/2) = 1.013e-2 of the limit
        model = example_41_source(p=4)
        t = 3.0
        dist = np.linalg.norm(X_EVAL - droplet.center)
        xi_sum = sum(
            expansion_term(m, droplet, model, X_EVAL, t).xi for m in modes[:20]
        )
        target = -droplet.radius / dist * model.incident(droplet.center, t - dist)
        n = np.arange(1, 21)
        captured = np.sum((n - 0.5) ** -2.0) / (np.pi**2 / 2.0)
        assert captured == pytest.approx(0.98987, abs=1e-5)
        assert xi_sum == pytest.approx(target * captured, rel=1e-10)
        # partial sums converge from below in magnitude
        assert abs(xi_sum) < abs(target)
        assert xi_sum == pytest.approx(target, rel=2e-2)


class TestTruncatedExpansion:
    def test_fig_style_mode_weights(self, modes):
        # (n - 1/2)^2 (int e_n)^2 at a = 1: 8 / (pi^3 (n - 1/2)^2)
        d1 = Droplet(center=np.zeros(3), radius=1.0, riesz_b=np.pi)
        m1 = modes_l0(d1, 20)
        vals = np.array([(m.j - 0.5) ** 2 * m.avg**2 for m in m1])
        assert vals[0] == pytest.approx(32.0 / np.pi**3, rel=1e-12)
        total = vals.sum()
        assert total == pytest.approx(4.0 / np.pi, rel=1.1e-2)

    def test_truncation_monotone_refinement(self, droplet, modes):
        model = example_41_source(p=4)
        ts = np.linspace(1.0, 4.0, 16)
        w8 = np.asarray(expansion_W_N(modes, droplet, model, X_EVAL, ts, 8))
        w16 = np.asarray(expansion_W_N(modes, droplet, model, X_EVAL, ts, 16))
        w24 = np.asarray(expansion_W_N(modes, droplet, model, X_EVAL, ts, 24))
        assert np.abs(w24 - w16).max() < np.abs(w16 - w8).max()

    def test_amplitude_linear_in_radius(self):
        # max amplitude of W_N scales like the droplet radius
        model = example_41_source(p=4)
        ts = np.linspace(1.0, 4.0, 40)
        amps = {}
        for a in (0.05, 0.005):
            d = Droplet(center=np.array([-0.2, 0, 0]), radius=a, riesz_b=4 * np.pi)
            m = modes_l0(d, 8)
            amps[a] = np.abs(np.asarray(expansion_W_N(m, d, model, X_EVAL, ts, 8))).max()
        assert amps[0.05] / amps[0.005] == pytest.approx(10.0, rel=0.1)

    def test_rejects_overlong_truncation(self, droplet, modes):
        model = example_41_source(p=4)
        with pytest.raises(ValueError):
            expansion_W_N(modes, droplet, model, X_EVAL, 1.0, len(modes) + 1)


class TestSynthesis:
    def test_zero_source_zero_trace(self):
        model = example_42_source()

        class Zero:
            c0 = 1.0
            v_support_end = 1.0

            def incident(self, x, t):
                return np.zeros(np.broadcast(np.atleast_2d(x)[..., 0], t).shape[-1:])

        d = Droplet(center=np.zeros(3), radius=1e-3, riesz_b=2 * np.pi)
        m = modes_l0(d, 8)
        zero = SeparableSource(
            space=type("Z", (), {"__call__": lambda s, x: np.zeros(np.atleast_2d(x).shape[0]),
                                 "laplacian": lambda s, x: np.zeros(np.atleast_2d(x).shape[0])})(),
            time=model.time,
            domain=model.domain,
        )
        trace = synthesize_measurement(m, d, zero, np.array([1.2, 0, 0]), 3.1)
        assert np.abs(trace.samples).max() == 0.0

    def test_window_validation(self):
        model = example_42_source()
        d = Droplet(center=np.zeros(3), radius=1e-3, riesz_b=2 * np.pi)
        m = modes_l0(d, 8)
        with pytest.raises(ValueError, match="t_start"):
            synthesize_measurement(m, d, model, np.array([1.2, 0, 0]), 1.5)

    def test_monomial_profile_rejected(self):
        model = example_41_source(p=4)
        d = Droplet(center=np.array([-0.2, 0, 0]), radius=1e-3, riesz_b=4 * np.pi)
        m = modes_l0(d, 8)
        with pytest.raises(ValueError, match="compact"):
            synthesize_measurement(m, d, model, np.array([1.2, 0, 0]), 10.0)

    def test_trace_scales_linearly_in_radius(self):
        model = example_42_source()
        x_star = np.array([1.2, 0.0, 0.0])
        amps = {}
        for a in (1e-3, 1e-4):
            d = Droplet(center=np.zeros(3), radius=a, riesz_b=2 * np.pi)
            m = modes_l0(d, 20)
            trace = synthesize_measurement(m, d, model, x_star, 3.1)
            amps[a] = np.abs(trace.samples).max()
        assert amps[1e-3] / amps[1e-4] == pytest.approx(10.0, rel=1e-3)

    def test_trace_window_metadata(self):
        model = example_42_source()
        d = Droplet(center=np.zeros(3), radius=1e-3, riesz_b=2 * np.pi)
        m = modes_l0(d, 20)
        trace = synthesize_measurement(m, d, model, np.array([1.2, 0, 0]), 3.1, 160)
        assert trace.duration == pytest.approx(1.0, abs=1e-15)
        assert trace.samples.shape == (161,)
        assert trace.times[0] == pytest.approx(3.1)
        assert first_arrival_time(d, np.array([1.2, 0, 0])) == pytest.approx(1.2)
