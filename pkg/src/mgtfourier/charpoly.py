"""Per-mode characteristic polynomial, root finding and stability thresholds.

For a single eigenvalue lam of the operator A, the modal dynamics are a
4-dimensional linear ODE whose characteristic polynomial is the monic
quartic

    z^4 + (alpha + kappa*lam) z^3
        + (beta*lam + alpha*kappa*lam + eta^2*lam^2) z^2
        + (gamma*lam + beta*kappa*lam^2 + alpha*eta^2*lam^2) z
        + gamma*kappa*lam^2.

Stability is decided two independent ways: by the roots (Durand-Kerner
simultaneous iteration) and by the Routh-Hurwitz coefficient test; the
latter, being root-free exact arithmetic, is the tie-breaker near the
stability boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NumericalFailure
from .params import SystemParams

_DK_MAX_ITER = 500
_DK_UPDATE_TOL = 1e-12


@dataclass(frozen=True)
class Quartic:
    """Monic quartic z^4 + a3 z^3 + a2 z^2 + a1 z + a0."""

    a3: float
    a2: float
    a1: float
    a0: float

    def coeffs(self) -> tuple:
        return (1.0, self.a3, self.a2, self.a1, self.a0)

    def __call__(self, z):
        return _polyval(self.coeffs(), z)


@dataclass(frozen=True)
class Cubic:
    """Monic cubic z^3 + b2 z^2 + b1 z + b0."""

    b2: float
    b1: float
    b0: float

    def coeffs(self) -> tuple:
        return (1.0, self.b2, self.b1, self.b0)

    def __call__(self, z):
        return _polyval(self.coeffs(), z)


@dataclass(frozen=True)
class RootSet:
    """All roots of a polynomial, sorted by (Re, Im).

    ``residual`` is the largest relative backward error over the roots:
    |p(z)| divided by the same polynomial evaluated with absolute values.
    """

    roots: tuple
    residual: float

    def max_real_part(self) -> float:
        return max(z.real for z in self.roots)


class ModeRate(NamedTuple):
    """Energy decay rate of a single mode; negative rate means growth."""

    rate: float
    unstable: bool


def _polyval(coeffs, z):
    acc = 0.0 + 0.0j if isinstance(z, complex) else 0.0
    for c in coeffs:
        acc = acc * z + c
    return acc


def _rel_residual(coeffs, z):
    """Relative backward error |p(z)| / p_abs(|z|) of one approximate root."""
    num = abs(_polyval(coeffs, z))
    den = 0.0
    for c in coeffs:
        den = den * abs(z) + abs(c)
    return num / max(den, 1e-300)


def build_quartic(p: SystemParams, lam: float) -> Quartic:
    """Characteristic quartic of the coupled mode at eigenvalue lam > 0."""
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    eta2 = p.eta**2
    return Quartic(
        a3=p.alpha + p.kappa * lam,
        a2=p.beta * lam + p.alpha * p.kappa * lam + eta2 * lam**2,
        a1=p.gamma * lam + p.beta * p.kappa * lam**2 + p.alpha * eta2 * lam**2,
        a0=p.gamma * p.kappa * lam**2,
    )


def build_mgt_cubic(p: SystemParams, lam: float) -> Cubic:
    """Characteristic cubic of the uncoupled third-order mode."""
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    return Cubic(b2=p.alpha, b1=p.beta * lam, b0=p.gamma * lam)


def _as_monic_coeffs(poly) -> tuple:
    if isinstance(poly, (Quartic, Cubic)):
        return poly.coeffs()
    coeffs = tuple(float(c) if not isinstance(c, complex) else c for c in poly)
    if len(coeffs) < 2:
        raise ValueError("polynomial must have degree >= 1")
    lead = coeffs[0]
    if lead == 0:
        raise ValueError("leading coefficient must be nonzero")
    if lead != 1.0:
        coeffs = tuple(c / lead for c in coeffs)
    return coeffs


def roots(poly) -> RootSet:
    """All complex roots by Durand-Kerner simultaneous iteration.

    Accepts a Quartic, a Cubic, or a plain coefficient sequence (leading
    coefficient first).  Deterministic: fixed initial guesses on a circle of
    radius 1 + max|coefficient|, update tolerance 1e-12, 500-iteration cap.
    Output is sorted by real part, then imaginary part.
    """
    coeffs = _as_monic_coeffs(poly)
    n = len(coeffs) - 1
    if not all(math.isfinite(abs(c)) for c in coeffs):
        raise ValueError("polynomial coefficients must be finite")

    scale = 1.0 + max(abs(c) for c in coeffs)
    # Offset angle avoids starting on the real axis where iterates could
    # collide for polynomials with real roots.
    z = [scale * cmath.exp(1j * (2.0 * math.pi * k / n + 0.4)) for k in range(n)]

    residual = math.inf
    for _ in range(_DK_MAX_ITER):
        max_update = 0.0
        for k in range(n):
            den = 1.0 + 0.0j
            for j in range(n):
                if j != k:
                    den *= z[k] - z[j]
            if den == 0:
                den = 1e-30 + 0.0j
            w = _polyval(coeffs, z[k]) / den
            z[k] -= w
            max_update = max(max_update, abs(w) / (1.0 + abs(z[k])))
        residual = max(_rel_residual(coeffs, zk) for zk in z)
        # Relative-update stop, with a residual escape hatch for multiple
        # roots (where corrections stagnate at the root-cluster radius).
        if max_update < _DK_UPDATE_TOL or residual < 1e-15:
            break

    # Newton polish: a few steps per root sharpen simple roots when the
    # Cauchy-bound starting circle is far from the actual root moduli.
    # Steps that fail to reduce |p| are rejected: near a multiple root the
    # derivative underflows to noise first and an unguarded step would kick a
    # converged iterate away from the cluster.
    dcoeffs = [coeffs[i] * (n - i) for i in range(n)]
    for k in range(n):
        for _ in range(20):
            dp = _polyval(dcoeffs, z[k])
            if dp == 0:
                break
            step = _polyval(coeffs, z[k]) / dp
            candidate = z[k] - step
            if abs(_polyval(coeffs, candidate)) >= abs(_polyval(coeffs, z[k])):
                break
            z[k] = candidate
            if abs(step) < 1e-15 * (1.0 + abs(z[k])):
                break
    residual = max(_rel_residual(coeffs, zk) for zk in z)

    if residual >= 1e-10:
        raise NumericalFailure(
            f"root finder did not converge: relative residual {residual:.3e} "
            "exceeds 1e-10",
            best=tuple(z),
            residual=residual,
        )
    ordered = tuple(sorted(z, key=lambda r: (r.real, r.imag)))
    return RootSet(roots=ordered, residual=residual)


def hurwitz_stable(q: Quartic) -> bool:
    """Routh-Hurwitz test: all roots in the open left half-plane.

    Root-free, hence the tie-breaking oracle near the stability boundary.
    """
    return (
        q.a3 > 0
        and q.a1 > 0
        and q.a0 > 0
        and q.a3 * q.a2 * q.a1 > q.a1**2 + q.a3**2 * q.a0
    )


def spectral_abscissa(p: SystemParams, lam: float) -> float:
    """Max real part over the roots of the modal quartic."""
    return roots(build_quartic(p, lam)).max_real_part()


def decay_rate_mode(p: SystemParams, lam: float) -> ModeRate:
    """Energy decay rate of the mode: twice the negated spectral abscissa.

    The energy is quadratic in the state, so it decays (or grows) at twice
    the modal rate.  A positive abscissa is flagged unstable and reported as
    a negative rate.
    """
    abscissa = spectral_abscissa(p, lam)
    return ModeRate(rate=-2.0 * abscissa, unstable=abscissa > 0)


def decay_rate_spectrum(p: SystemParams, spectrum: Sequence[float]) -> ModeRate:
    """Worst (smallest) modal decay rate over a finite eigenvalue grid."""
    spectrum = list(spectrum)
    if not spectrum:
        raise ValueError("spectrum must be nonempty")
    rates = [decay_rate_mode(p, lam) for lam in spectrum]
    return ModeRate(
        rate=min(r.rate for r in rates),
        unstable=any(r.unstable for r in rates),
    )


def hurwitz_margin(p: SystemParams, lam: float, s: float) -> float:
    """The decisive Routh-Hurwitz determinant of the quartic at eta^2 = s.

    Delta3(s) = a3*a2(s)*a1(s) - a1(s)^2 - a3^2*a0; positive iff the mode is
    stable (the remaining coefficient conditions always hold for valid
    parameters).  Quadratic in s with leading coefficient
    alpha*kappa*lam^5 > 0.
    """
    q = build_quartic(replace(p, eta=math.sqrt(s) if s > 0 else 0.0), lam)
    return q.a3 * q.a2 * q.a1 - q.a1**2 - q.a3**2 * q.a0


def _hurwitz_margin_quadratic(p: SystemParams, lam: float) -> tuple:
    """Coefficients (A, B, C) of Delta3(s) = A s^2 + B s + C."""
    a3 = p.alpha + p.kappa * lam
    A2 = p.beta * lam + p.alpha * p.kappa * lam  # a2 at s = 0
    A1 = p.gamma * lam + p.beta * p.kappa * lam**2  # a1 at s = 0
    a0 = p.gamma * p.kappa * lam**2
    lam2 = lam**2
    A = p.alpha * p.kappa * lam**5
    B = a3 * (A2 * p.alpha * lam2 + A1 * lam2) - 2.0 * A1 * p.alpha * lam2
    C = a3 * A2 * A1 - A1**2 - a3**2 * a0
    return A, B, C


def tau_star(
    p: SystemParams,
    lam: float,
    cross_check: bool = True,
    check_tol: float = 1e-6,
) -> float:
    """Exact numerical stability threshold: sup of eta^2 giving instability.

    Closed form: the larger real root of the Routh-Hurwitz margin Delta3(s),
    an upward parabola in s = eta^2, so there is a single stability
    crossing.  For mu <= 0 every eta is stable and 0 is returned.  When
    cross_check is set, the closed form is validated against bisection on
    the sign of the spectral abscissa.
    """
    if p.mu <= 0:
        return 0.0
    A, B, C = _hurwitz_margin_quadratic(p, lam)
    disc = B**2 - 4.0 * A * C
    if disc < 0:
        raise NumericalFailure(
            f"Hurwitz margin has no real crossing (disc={disc:.3e}) at lam={lam}"
        )
    sqrt_disc = math.sqrt(disc)
    # Numerically stable quadratic formula, avoiding cancellation.
    q = -0.5 * (B + math.copysign(sqrt_disc, B)) if B != 0 else 0.5 * sqrt_disc
    if q == 0:
        candidates = [0.0]
    else:
        candidates = [q / A, C / q]
    tau = max(max(candidates), 0.0)

    if cross_check:
        tau_bis = tau_star_bisection(p, lam)
        if abs(tau - tau_bis) > check_tol:
            raise NumericalFailure(
                f"tau_star closed form {tau!r} and bisection {tau_bis!r} "
                f"disagree beyond {check_tol}",
                best=tau_bis,
                residual=abs(tau - tau_bis),
            )
    return tau


def tau_star_bisection(p: SystemParams, lam: float, tol: float = 1e-10) -> float:
    """Independent threshold oracle: bisection on the abscissa sign in eta^2."""
    if p.mu <= 0:
        return 0.0

    def unstable(s: float) -> bool:
        return spectral_abscissa(replace(p, eta=math.sqrt(s)), lam) > 0

    lo = 0.0
    if not unstable(lo):
        return 0.0
    hi = 1.0
    while unstable(hi):
        hi *= 2.0
        if hi > 1e12:
            raise NumericalFailure("no stable eta^2 found below 1e12")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if unstable(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def modal_system_matrix(p: SystemParams, lam: float) -> np.ndarray:
    """4x4 matrix of the modal ODE in state order (u, v, w, theta).

    u' = v, v' = w, w' = -gamma*lam*u - beta*lam*v - alpha*w + eta*lam*theta,
    theta' = -alpha*eta*lam*v - eta*lam*w - kappa*lam*theta.  Its
    characteristic polynomial equals build_quartic(p, lam) coefficient-wise.
    """
    el = p.eta * lam
    return np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [-p.gamma * lam, -p.beta * lam, -p.alpha, el],
            [0.0, -p.alpha * el, -el, -p.kappa * lam],
        ]
    )
