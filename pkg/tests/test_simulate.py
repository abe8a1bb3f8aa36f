import math

import numpy as np
import pytest
import scipy.linalg

from mgtfourier.charpoly import decay_rate_mode, modal_system_matrix
from mgtfourier.errors import UnfitWindow
from mgtfourier.simulate import (
    SpectrumSpec,
    Trajectory,
    energy_identity_residual,
    integrate_linear,
    measured_rate,
    simulate_mode,
    simulate_superposition,
)

from test_params import make, random_params

X0 = (1.0, 0.0, 0.0, 0.0)


class TestSpectrumSpec:
    def test_dirichlet_rule(self):
        spec = SpectrumSpec.dirichlet(2.0, 4)
        assert spec.lambdas == (2.0, 8.0, 18.0, 32.0)

    def test_explicit_validation(self):
        with pytest.raises(ValueError):
            SpectrumSpec.explicit([])
        with pytest.raises(ValueError):
            SpectrumSpec.explicit([1.0, -2.0])
        with pytest.raises(ValueError):
            SpectrumSpec.dirichlet(1.0, 0)


class TestIntegrateLinear:
    def test_matches_matrix_exponential(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            p = random_params(rng)
            lam = rng.uniform(0.1, 5.0)
            a = modal_system_matrix(p, lam)
            x0 = rng.normal(size=4)
            times, states = integrate_linear(a, x0, 1.0, 1e-3)
            exact = scipy.linalg.expm(a) @ x0
            scale = 1.0 + np.abs(exact).max()
            assert np.abs(states[-1] - exact).max() < 1e-8 * scale

    def test_fourth_order_convergence(self):
        # Richardson: halving dt divides the end-state error by ~16.
        p = make()
        a = modal_system_matrix(p, 1.0)
        x0 = np.array([1.0, -0.5, 0.25, 0.75])
        exact = scipy.linalg.expm(a) @ x0
        err = []
        for dt in (2e-2, 1e-2):
            _, states = integrate_linear(a, x0, 1.0, dt)
            err.append(np.abs(states[-1] - exact).max())
        factor = err[0] / err[1]
        assert 12.0 < factor < 20.0

    def test_blowup_truncates(self):
        a = np.array([[50.0]])
        times, states = integrate_linear(a, np.array([1.0]), 1000.0, 0.5)
        assert len(states) < int(round(1000.0 / 0.5)) + 1
        assert np.all(np.isfinite(states))
        assert np.abs(states).max() <= 1e300

    def test_argument_validation(self):
        a = np.eye(2)
        with pytest.raises(ValueError):
            integrate_linear(a, np.ones(2), 1.0, 0.0)
        with pytest.raises(ValueError):
            integrate_linear(a, np.ones(2), 1e-4, 1e-3)

    def test_time_grid(self):
        a = -np.eye(1)
        times, states = integrate_linear(a, np.ones(1), 1.0, 0.25)
        assert np.allclose(times, [0.0, 0.25, 0.5, 0.75, 1.0])


class TestSimulateMode:
    def test_energy_recorded_consistently(self):
        from mgtfourier.energy import energy_E, quasienergy_W

        p = make()
        traj = simulate_mode(p, 1.0, X0, 2.0, 1e-3)
        for i in (0, len(traj.times) // 2, -1):
            x = traj.state_at(i if i >= 0 else len(traj.times) - 1)
            j = i if i >= 0 else len(traj.times) - 1
            assert traj.energy[j] == pytest.approx(energy_E(x, p), rel=1e-12)
            assert traj.quasienergy[j] == pytest.approx(quasienergy_W(x, p), rel=1e-12)

    def test_stable_mode_decays(self):
        traj = simulate_mode(make(), 1.0, X0, 20.0, 1e-3)
        assert not traj.blew_up
        assert traj.energy[-1] < 1e-2 * traj.energy[0]

    def test_unstable_mode_blows_up(self):
        # supercritical, eta=0: spectral abscissa > 0; the large initial
        # amplitude keeps the horizon short
        p = make(eta=0.0)
        traj = simulate_mode(p, 1.0, (1e250, 0.0, 0.0, 0.0), 2000.0, 1e-2)
        assert traj.blew_up
        assert len(traj.times) == len(traj.states)

    def test_accepts_mode_state(self):
        from mgtfourier.energy import ModeState

        p = make()
        x = ModeState(u=1.0, v=0.0, w=0.0, theta=0.0, lam=1.0)
        traj = simulate_mode(p, 1.0, x, 1.0, 1e-3)
        assert np.array_equal(traj.states[0], [1.0, 0.0, 0.0, 0.0])


class TestSuperposition:
    def test_total_energy_is_sum(self):
        p = make()
        spec = SpectrumSpec.dirichlet(1.0, 3)
        x0s = [X0, (0.0, 1.0, 0.0, 0.0), (0.0, 0.0, 0.0, 1.0)]
        trajs, total = simulate_superposition(p, spec, x0s, 1.0, 1e-3)
        assert len(trajs) == 3
        manual = sum(t.energy for t in trajs)
        assert np.allclose(total, manual)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            simulate_superposition(make(), SpectrumSpec.dirichlet(1.0, 2), [X0], 1.0, 1e-3)

    def test_truncates_to_common_prefix(self):
        p = make(eta=0.0)  # unstable modes blow up at mode-dependent times
        spec = SpectrumSpec.explicit([1.0, 4.0])
        big = (1e250, 0.0, 0.0, 0.0)
        trajs, total = simulate_superposition(p, spec, [big, big], 2000.0, 1e-2)
        assert len(total) == min(len(t.times) for t in trajs)


class TestEnergyIdentity:
    def test_residual_small_along_flow(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            p = random_params(rng)
            lam = rng.uniform(0.5, 4.0)
            traj = simulate_mode(p, lam, rng.normal(size=4), 2.0, 1e-3)
            if traj.blew_up:
                continue
            scale = 1.0 + np.abs(traj.quasienergy).max()
            assert energy_identity_residual(traj, p) < 1e-6 * scale

    def test_finite_difference_oracle(self):
        # independent check: dW/dt by central differences matches the
        # claimed integrand pointwise at interior samples
        p = make()
        traj = simulate_mode(p, 1.0, X0, 1.0, 1e-4)
        w = traj.quasienergy
        dt = traj.times[1] - traj.times[0]
        dwdt = (w[2:] - w[:-2]) / (2.0 * dt)
        v = traj.states[1:-1, 1]
        theta = traj.states[1:-1, 3]
        claimed = 2.0 * p.mu * traj.lam * v**2 - 2.0 * p.kappa * traj.lam * theta**2
        assert np.abs(dwdt - claimed).max() < 1e-5

    def test_short_trajectory_returns_zero(self):
        traj = Trajectory(
            lam=1.0,
            times=np.array([0.0, 0.1]),
            states=np.zeros((2, 4)),
            energy=np.zeros(2),
            quasienergy=np.zeros(2),
        )
        assert energy_identity_residual(traj, make()) == 0.0


class TestMeasuredRate:
    def test_pure_exponential(self):
        # synthetic trajectory with known energy decay rate 0.7
        times = np.linspace(0.0, 10.0, 1001)
        traj = Trajectory(
            lam=1.0,
            times=times,
            states=np.zeros((1001, 4)),
            energy=np.exp(-0.7 * times),
            quasienergy=np.zeros(1001),
        )
        assert measured_rate(traj) == pytest.approx(0.7, abs=1e-10)

    def test_matches_spectral_rate(self):
        p = make()
        lam = 1.0
        traj = simulate_mode(p, lam, X0, 60.0, 1e-3)
        spectral = decay_rate_mode(p, lam).rate
        assert measured_rate(traj) == pytest.approx(spectral, rel=2e-2)

    def test_growth_is_negative(self):
        p = make(eta=0.0)
        traj = simulate_mode(p, 1.0, X0, 100.0, 1e-3)
        assert not traj.blew_up
        assert measured_rate(traj) < 0

    def test_window_too_short(self):
        times = np.linspace(0.0, 1.0, 50)
        traj = Trajectory(
            lam=1.0,
            times=times,
            states=np.zeros((50, 4)),
            energy=np.ones(50),
            quasienergy=np.zeros(50),
        )
        with pytest.raises(UnfitWindow):
            measured_rate(traj)

    def test_zero_energy_window_rejected(self):
        times = np.linspace(0.0, 10.0, 500)
        traj = Trajectory(
            lam=1.0,
            times=times,
            states=np.zeros((500, 4)),
            energy=np.zeros(500),
            quasienergy=np.zeros(500),
        )
        with pytest.raises(UnfitWindow):
            measured_rate(traj)
