"""Fixed-step RK4 integration of modal dynamics and empirical rate fits.

Modes decouple exactly (every operator in the system is a function of A),
so a multi-mode run is a list of independent 4-dimensional integrations
whose energies add.  Fixed-step classical RK4 keeps CSV outputs
bit-for-bit reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_simpson

from .charpoly import modal_system_matrix
from .energy import ModeState
from .errors import UnfitWindow
from .params import SystemParams

BLOWUP_THRESHOLD = 1e300
MIN_FIT_SAMPLES = 100


@dataclass(frozen=True)
class SpectrumSpec:
    """A finite set of eigenvalues of A: explicit, or lambda1 * k^2 rule."""

    lambdas: tuple

    @classmethod
    def explicit(cls, lambdas: Sequence[float]) -> "SpectrumSpec":
        lambdas = tuple(float(x) for x in lambdas)
        if not lambdas or min(lambdas) <= 0:
            raise ValueError("need a nonempty list of positive eigenvalues")
        return cls(lambdas=lambdas)

    @classmethod
    def dirichlet(cls, lambda1: float, count: int) -> "SpectrumSpec":
        if count < 1:
            raise ValueError("count must be >= 1")
        return cls(lambdas=tuple(lambda1 * k**2 for k in range(1, count + 1)))


@dataclass
class Trajectory:
    """Time grid, states (rows of u, v, w, theta), and recorded E and W."""

    lam: float
    times: np.ndarray
    states: np.ndarray
    energy: np.ndarray
    quasienergy: np.ndarray
    blew_up: bool = field(default=False)

    def state_at(self, i: int) -> ModeState:
        u, v, w, theta = self.states[i]
        return ModeState(u=u, v=v, w=w, theta=theta, lam=self.lam)


def integrate_linear(a: np.ndarray, x0: np.ndarray, t_end: float, dt: float):
    """Classical RK4 on x' = a x; returns (times, states).

    Truncates when any state component exceeds the blow-up threshold or
    stops being finite; the caller inspects the returned length.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < dt:
        raise ValueError(f"t_end must be at least dt, got {t_end}")
    n_steps = int(round(t_end / dt))
    x = np.asarray(x0, dtype=float).copy()
    states = [x.copy()]
    half = 0.5 * dt
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n_steps):
            k1 = a @ x
            k2 = a @ (x + half * k1)
            k3 = a @ (x + half * k2)
            k4 = a @ (x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)) or np.abs(x).max() > BLOWUP_THRESHOLD:
                break
            states.append(x.copy())
    states = np.array(states)
    times = np.arange(len(states)) * dt
    return times, states


def _mode_energies(p: SystemParams, lam: float, states: np.ndarray):
    a = p.alpha
    u, v, w, theta = states.T
    # states just below the blow-up threshold overflow when squared; the
    # resulting inf/nan energies are honest and kept as-is
    with np.errstate(over="ignore", invalid="ignore"):
        sq1 = (v + a * u) ** 2
        sq2 = (w + a * v) ** 2
        energy = 0.5 * (lam * sq1 + sq2 + lam * v**2 + theta**2)
        quasi = (p.gamma / a) * lam * sq1 + sq2 - (p.mu / a) * lam * v**2 + theta**2
    return energy, quasi


def simulate_mode(p: SystemParams, lam: float, x0, t_end: float, dt: float) -> Trajectory:
    """Integrate one mode and record E and W along the way.

    x0 may be a ModeState or any 4-sequence (u, v, w, theta).  A truncated
    trajectory with blew_up=True is an expected, reportable outcome, not an
    error.
    """
    if isinstance(x0, ModeState):
        x0 = x0.vector()
    x0 = np.asarray(x0, dtype=float)
    a = modal_system_matrix(p, lam)
    times, states = integrate_linear(a, x0, t_end, dt)
    n_expected = int(round(t_end / dt)) + 1
    energy, quasi = _mode_energies(p, lam, states)
    return Trajectory(
        lam=lam,
        times=times,
        states=states,
        energy=energy,
        quasienergy=quasi,
        blew_up=len(states) < n_expected,
    )


def simulate_superposition(
    p: SystemParams,
    spec: SpectrumSpec,
    x0s: Sequence,
    t_end: float,
    dt: float,
):
    """Integrate each mode independently; aggregate energy is the plain sum.

    Returns (trajectories, total_energy) where total_energy covers the
    common prefix of the time grids (shorter if some mode blew up).
    """
    if len(x0s) != len(spec.lambdas):
        raise ValueError("one initial state per eigenvalue is required")
    trajectories = [
        simulate_mode(p, lam, x0, t_end, dt) for lam, x0 in zip(spec.lambdas, x0s)
    ]
    n = min(len(t.times) for t in trajectories)
    total_energy = np.sum([t.energy[:n] for t in trajectories], axis=0)
    return trajectories, total_energy


def energy_identity_residual(traj: Trajectory, p: SystemParams) -> float:
    """Max deviation from the exact quasienergy dissipation identity.

    W(t) - W(0) must equal the integral of 2*mu*lam*v^2 - 2*kappa*lam*theta^2;
    the integral is composite Simpson on the stored grid.  The coupling
    constant does not appear: its contributions cancel exactly.
    """
    if len(traj.times) < 3:
        return 0.0
    v = traj.states[:, 1]
    theta = traj.states[:, 3]
    dt = traj.times[1] - traj.times[0]
    # truncated blow-up trajectories overflow when squared; the resulting
    # inf/nan residual is an honest report
    with np.errstate(over="ignore", invalid="ignore"):
        integrand = 2.0 * p.mu * traj.lam * v**2 - 2.0 * p.kappa * traj.lam * theta**2
        integral = cumulative_simpson(integrand, dx=dt, initial=0.0)
        residual = traj.quasienergy - traj.quasienergy[0] - integral
    return float(np.abs(residual).max())


def measured_rate(traj: Trajectory, fit_fraction: float = 0.5) -> float:
    """Least-squares slope of log E over the trailing window, negated.

    Positive return value is an observed decay rate; negative means growth.
    The window skips transients from non-dominant roots and must hold at
    least 100 samples of strictly positive, finite energy.
    """
    n = len(traj.times)
    start = int(n * (1.0 - fit_fraction))
    t = traj.times[start:]
    e = traj.energy[start:]
    if len(e) < MIN_FIT_SAMPLES:
        raise UnfitWindow(f"fit window has {len(e)} samples, need {MIN_FIT_SAMPLES}")
    if not np.all(np.isfinite(e)) or np.any(e <= 0):
        raise UnfitWindow("energy hit zero or overflowed inside the fit window")
    slope = np.polyfit(t, np.log(e), 1)[0]
    return float(-slope)
