"""Numerical probes of the limiting regimes: |eta| -> infinity, kappa -> infinity.

Each probe evaluates the modal quartic at a hand-picked negative abscissa
and confirms the sign predictions that bound the attainable decay rate in
the corresponding limit.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import NamedTuple, Sequence

from .charpoly import build_quartic, decay_rate_mode, roots
from .errors import NumericalFailure, UnsupportedRegime
from .params import SystemParams, theoretical_threshold
from .util import golden_max

_REAL_TOL = 1e-9


class EtaLimitProbe(NamedTuple):
    eps_eta: float
    p_value: float
    root_found: bool


class KappaLimitConstants(NamedTuple):
    r: float
    xi: float


class KappaLimitProbe(NamedTuple):
    zeta: float
    p_value: float
    f_value: float
    g_value: float


class OmegaKappa(NamedTuple):
    omega: float
    eta: float


def eta_limit_probe(p: SystemParams, lam: float) -> EtaLimitProbe:
    """Probe the large-coupling collapse of the decay rate.

    eps_eta = (gamma*kappa*lam^2 + 1)/(alpha*lam^2*eta^2) shrinks like
    1/eta^2 and the quartic tends to -1 there, trapping a real root in
    (-eps_eta, 0) and hence bounding the decay rate by 2*eps_eta.
    """
    if p.eta == 0:
        raise UnsupportedRegime("eta must be nonzero for the large-eta probe")
    eps_eta = (p.gamma * p.kappa * lam**2 + 1.0) / (p.alpha * lam**2 * p.eta**2)
    quartic = build_quartic(p, lam)
    value = quartic(-eps_eta)
    found = any(
        abs(z.imag) < _REAL_TOL and -eps_eta < z.real < 0
        for z in roots(quartic).roots
    )
    return EtaLimitProbe(eps_eta=eps_eta, p_value=value, root_found=found)


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _unique_real_cubic_root(b2: float, b1: float, b0: float) -> float:
    """The real root of t^3 + b2 t^2 + b1 t + b0, asserting uniqueness.

    Cardano when the discriminant says one real root; trigonometric form
    otherwise, in which case multiple distinct real roots fail loudly
    instead of silently picking one.
    """
    # Depressed cubic s^3 + ps + q via t = s - b2/3.
    shift = b2 / 3.0
    pp = b1 - b2**2 / 3.0
    q = 2.0 * b2**3 / 27.0 - b2 * b1 / 3.0 + b0
    disc = -4.0 * pp**3 - 27.0 * q**2
    if disc < 0:
        rad = math.sqrt(q**2 / 4.0 + pp**3 / 27.0)
        s = _cbrt(-q / 2.0 + rad) + _cbrt(-q / 2.0 - rad)
        return s - shift
    # Three real roots (or a repeated one): trigonometric form.
    if pp == 0:
        real_roots = [_cbrt(-q)]
    else:
        m = 2.0 * math.sqrt(-pp / 3.0)
        arg = max(-1.0, min(1.0, 3.0 * q / (pp * m)))
        phase = math.acos(arg) / 3.0
        real_roots = [m * math.cos(phase - 2.0 * math.pi * k / 3.0) for k in range(3)]
    distinct: list = []
    for root in sorted(r - shift for r in real_roots):
        if not distinct or abs(root - distinct[-1]) > 1e-8 * (1.0 + abs(root)):
            distinct.append(root)
    if len(distinct) != 1:
        raise NumericalFailure(
            f"expected a unique real cubic root, found {distinct}", best=distinct
        )
    return distinct[0]


def kappa_limit_constants(p: SystemParams, lam: float) -> KappaLimitConstants:
    """The pair (r, xi) controlling the bounded-rate bound as kappa grows.

    r = alpha^2*lam / (alpha^3 - 4*alpha*beta*lam + 8*gamma*lam), positive
    for mu >= 0; xi is the unique real root of
    -xi^3 + (alpha + lam/r) xi^2 + gamma*lam = 0 and satisfies xi > alpha.
    """
    if p.mu < 0:
        raise UnsupportedRegime("kappa-limit constants require mu >= 0")
    denom = p.alpha**3 - 4.0 * p.alpha * p.beta * lam + 8.0 * p.gamma * lam
    r = p.alpha**2 * lam / denom
    # -xi^3 + (alpha + lam/r) xi^2 + gamma*lam = 0, rewritten monic.
    xi = _unique_real_cubic_root(-(p.alpha + lam / r), 0.0, -p.gamma * lam)
    residual = -(xi**3) + (p.alpha + lam / r) * xi**2 + p.gamma * lam
    if abs(residual) > 1e-9 * (1.0 + xi**3):
        raise NumericalFailure(f"xi root residual too large: {residual:.3e}")
    return KappaLimitConstants(r=r, xi=xi)


def kappa_limit_probe(p: SystemParams, lam: float, kappa: float) -> KappaLimitProbe:
    """Evaluate the split p = f + g at the probe point -zeta.

    zeta = alpha/2 when kappa/eta^2 <= r, else zeta = xi.  f carries all the
    kappa- and eta-dependence; g is the fixed residual quartic part.
    """
    pk = replace(p, kappa=kappa)
    consts = kappa_limit_constants(pk, lam)
    eta2 = pk.eta**2
    zeta = 0.5 * pk.alpha if kappa / eta2 <= consts.r else consts.xi

    lam2 = lam**2
    z = -zeta
    f_value = (
        kappa * lam * z**3
        + (pk.alpha * kappa * lam + eta2 * lam2) * z**2
        + (pk.beta * kappa * lam2 + pk.alpha * eta2 * lam2) * z
        + pk.gamma * kappa * lam2
    )
    g_value = z**4 + pk.alpha * z**3 + pk.beta * lam * z**2 + pk.gamma * lam * z
    p_value = build_quartic(pk, lam)(z)
    if abs(p_value - (f_value + g_value)) > 1e-9 * (1.0 + abs(p_value)):
        raise NumericalFailure(
            f"split identity p = f + g violated: {p_value} vs {f_value + g_value}"
        )
    return KappaLimitProbe(zeta=zeta, p_value=p_value, f_value=f_value, g_value=g_value)


def subcritical_value(p: SystemParams, lam: float) -> float:
    """Evaluate the quartic at -alpha and check p(-alpha) = lam*mu*(kappa*lam - alpha).

    Negative whenever mu < 0 and kappa*lam > alpha, trapping a real root in
    (-alpha, 0) and bounding the subcritical decay rate as kappa grows.
    """
    value = build_quartic(p, lam)(-p.alpha)
    closed = lam * p.mu * (p.kappa * lam - p.alpha)
    if abs(value - closed) > 1e-10 * max(1.0, abs(closed)):
        raise NumericalFailure(
            f"closed form p(-alpha) mismatch: {value} vs {closed}",
            residual=abs(value - closed),
        )
    return value


def omega_kappa_scan(
    p: SystemParams,
    kappa: float,
    eta_grid: Sequence[float] | None = None,
    lam: float | None = None,
) -> OmegaKappa:
    """Best modal decay rate at fixed kappa over a coupling grid.

    Grid + golden refinement around the best point; the result is a lower
    bound on the true maximum over eta.  Returns the achieving eta as well.
    """
    if lam is None:
        lam = p.lambda1
    pk = replace(p, kappa=kappa)
    if eta_grid is None:
        tau_mu = theoretical_threshold(pk) * pk.mu
        lo = max(math.sqrt(max(tau_mu, 0.0)) * 1.01, 1e-3)
        hi = 1e3 * (1.0 + kappa)
        n = 200
        ratio = (hi / lo) ** (1.0 / (n - 1))
        eta_grid = [lo * ratio**i for i in range(n)]
    eta_grid = list(eta_grid)
    if not eta_grid:
        raise ValueError("eta grid must be nonempty")

    def rate_at(eta: float) -> float:
        return decay_rate_mode(replace(pk, eta=eta), lam).rate

    values = [rate_at(eta) for eta in eta_grid]
    i = max(range(len(eta_grid)), key=values.__getitem__)
    lo_b = eta_grid[max(i - 1, 0)]
    hi_b = eta_grid[min(i + 1, len(eta_grid) - 1)]
    if hi_b > lo_b:
        eta_best, omega = golden_max(rate_at, lo_b, hi_b, tol=1e-8 * (1.0 + hi_b))
    else:
        eta_best, omega = eta_grid[i], values[i]
    return OmegaKappa(omega=omega, eta=eta_best)
