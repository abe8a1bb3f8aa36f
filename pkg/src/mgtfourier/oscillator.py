"""Damped harmonic oscillator x'' + x' + x = 0: the certified-rate gap demo.

The true energy decay rate is 1 (roots -1/2 +- i sqrt(3)/2), while the best
rate reachable through the classical multiplier y + eps*x energy estimate
is 1 - sqrt(5)/5, about 0.55.  Everything here is checked both analytically
and through the shared root finder / integrator.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_simpson

from .charpoly import roots
from .errors import NumericalFailure
from .simulate import integrate_linear
from .util import bisect_root, grid_then_golden

OSC_MATRIX = np.array([[0.0, 1.0], [-1.0, -1.0]])


class OscTrajectory(NamedTuple):
    times: np.ndarray
    states: np.ndarray  # rows (x, y)


def osc_true_rate() -> float:
    """Energy decay rate from the roots of z^2 + z + 1 (equals 1)."""
    rs = roots((1.0, 1.0, 1.0))
    return -2.0 * rs.max_real_part()


def osc_energy(x: float, y: float) -> float:
    return 0.5 * (x**2 + y**2)


def osc_g(x: float, y: float, epsilon: float) -> float:
    return (1.0 + epsilon) * x**2 + y**2 + 2.0 * epsilon * x * y


def osc_f(x: float, y: float, epsilon: float) -> float:
    return 2.0 * epsilon * x**2 + 2.0 * (1.0 - epsilon) * y**2


def simulate_osc(x0: float, y0: float, t_end: float, dt: float) -> OscTrajectory:
    times, states = integrate_linear(OSC_MATRIX, np.array([x0, y0]), t_end, dt)
    return OscTrajectory(times=times, states=states)


def osc_identity_residual(traj: OscTrajectory, epsilon: float) -> float:
    """Max deviation from the multiplier identity g(t) - g(0) + int f = 0."""
    x = traj.states[:, 0]
    y = traj.states[:, 1]
    g = osc_g(x, y, epsilon)
    f = osc_f(x, y, epsilon)
    dt = traj.times[1] - traj.times[0]
    integral = cumulative_simpson(f, dx=dt, initial=0.0)
    return float(np.abs(g - g[0] + integral).max())


def osc_admissible(epsilon: float, omega: float) -> bool:
    """Membership in the admissible region of the (eps, omega) program.

    eps in (0,1), omega in (0,1], 2*eps - omega - omega*eps > 0, and the
    discriminant condition making omega*g <= f hold for every state.
    """
    if not (0.0 < epsilon < 1.0 and 0.0 < omega <= 1.0):
        return False
    lin = 2.0 * epsilon - omega - omega * epsilon
    if not lin > 0:
        return False
    disc = (2.0 * omega * epsilon) ** 2 - 4.0 * lin * (2.0 - 2.0 * epsilon - omega)
    return disc <= 0


def osc_omega_of_eps(epsilon: float) -> float:
    """Largest omega admissible at a fixed epsilon (closed form).

    1 - sqrt((1 - 3*eps + 3*eps^2)/(1 + eps - eps^2)); the radicand
    numerator has negative discriminant, so it is defined on all of (0,1).
    """
    return 1.0 - math.sqrt(
        (1.0 - 3.0 * epsilon + 3.0 * epsilon**2) / (1.0 + epsilon - epsilon**2)
    )


def _omega_max_by_bisection(epsilon: float) -> float:
    """Largest admissible omega at fixed epsilon, using only osc_admissible.

    The admissible omegas at fixed epsilon form an interval (0, omega_max];
    bisection on the membership predicate finds its right end.
    """
    hi = min(2.0 * epsilon / (1.0 + epsilon), 1.0) + 1e-9
    return bisect_root(
        lambda w: 1.0 if osc_admissible(epsilon, w) else -1.0, 1e-12, hi, tol=1e-13
    )


def osc_optimize():
    """Maximize the certified rate over the admissible region.

    Two independent routes: golden-section on the 1-D closed form, and the
    2-variable constrained program solved through the boundary membership
    predicate alone.  Disagreement beyond 1e-9 fails loudly.  Returns
    (eps_opt, omega_b) with eps_opt = 1/2 and omega_b = 1 - sqrt(5)/5
    analytically.
    """
    eps_1d, omega_1d = grid_then_golden(
        osc_omega_of_eps, 1e-9, 1.0 - 1e-9, n_grid=200, tol=1e-10
    )
    eps_2d, omega_2d = grid_then_golden(
        _omega_max_by_bisection, 1e-6, 1.0 - 1e-6, n_grid=200, tol=1e-10
    )
    if abs(omega_1d - omega_2d) > 1e-9:
        raise NumericalFailure(
            f"constrained program ({omega_2d}) and closed form ({omega_1d}) disagree",
            residual=abs(omega_1d - omega_2d),
        )
    # Interior points and the first-constraint boundary never beat the
    # second-constraint boundary; sample to confirm.
    rng = np.random.default_rng(0)
    for eps, w in zip(rng.uniform(0.01, 0.99, 256), rng.uniform(0.0, 1.0, 256)):
        if osc_admissible(eps, w) and w > omega_1d + 1e-9:
            raise NumericalFailure(f"sampled admissible point beats optimum: {(eps, w)}")
    return eps_1d, omega_1d
