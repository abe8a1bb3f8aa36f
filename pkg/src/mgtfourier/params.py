"""Structural parameters of the MGT-Fourier system and stability thresholds.

The system couples a third-order-in-time wave equation (parameters alpha,
beta, gamma) with a Fourier heat equation (conductivity kappa) through a
coupling constant eta.  Everything downstream is driven by the derived
quantity mu = gamma - alpha*beta: mu < 0 is the subcritical (dissipative)
regime, mu = 0 critical, mu > 0 supercritical (antidissipative).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Regime(Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class SystemParams:
    """The five structural constants plus the bottom of the operator spectrum.

    alpha, beta, gamma, kappa, lambda1 must be strictly positive; eta is any
    real.  mu and the stability number are always computed on demand from
    (alpha, beta, gamma), so the identity mu = -alpha * stability_number
    holds by construction.
    """

    alpha: float
    beta: float
    gamma: float
    kappa: float
    eta: float
    lambda1: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "kappa", "lambda1"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if not -float("inf") < self.eta < float("inf"):
            raise ValueError(f"eta must be finite, got {self.eta}")

    @property
    def mu(self) -> float:
        return self.gamma - self.alpha * self.beta

    @property
    def stability_number(self) -> float:
        # beta - gamma/alpha, written so that mu = -alpha * stability_number
        # is exact in floating point.
        return -self.mu / self.alpha


@dataclass(frozen=True)
class ProofConstants:
    """Constants entering the Lyapunov-functional decay estimate.

    sigma > 0 exactly when the threshold condition eta^2 > tau(kappa)*mu
    holds; a nonpositive sigma is a flagged value, not an error, since
    threshold scans deliberately cross it.
    """

    rho: float
    sigma: float
    ell: float

    @property
    def sigma_positive(self) -> bool:
        return self.sigma > 0


def classify_regime(p: SystemParams) -> Regime:
    """Classify by the sign of mu = gamma - alpha*beta (no tolerance)."""
    if p.mu > 0:
        return Regime.SUPERCRITICAL
    if p.mu < 0:
        return Regime.SUBCRITICAL
    return Regime.CRITICAL


def theoretical_threshold(p: SystemParams) -> float:
    """Stability threshold tau(kappa): eta^2 > tau*mu implies decay.

    Piecewise in kappa, continuous at kappa = alpha/lambda1 where it attains
    its global minimum 2/(alpha*lambda1).
    """
    a, k, l1 = p.alpha, p.kappa, p.lambda1
    if k < a / l1:
        return theoretical_threshold_1d(p)
    return 2.0 * k / a**2


def theoretical_threshold_1d(p: SystemParams) -> float:
    """Sharper threshold valid when the 0- and 1-norms coincide (scalar A).

    This is the first branch of :func:`theoretical_threshold`, extended to
    all kappa > 0.
    """
    a, k, l1 = p.alpha, p.kappa, p.lambda1
    return (2.0 * k / a**2) * (1.0 - a / (k * l1) + a**2 / (k * l1) ** 2)


def stability_predicate(p: SystemParams) -> bool:
    """True iff the sufficient exponential-stability condition holds.

    eta^2 > tau(kappa)*mu; at mu = 0 this reads eta != 0, and for mu < 0 it
    holds vacuously for every eta.
    """
    mu = p.mu
    if mu == 0:
        return p.eta != 0
    return p.eta**2 > theoretical_threshold(p) * mu


def proof_constants(p: SystemParams) -> ProofConstants:
    """The (rho, sigma, ell) triple used by the decay certificate.

    rho   = 4(mu+kappa) / (alpha*eta^2 + alpha*kappa*tau)
    sigma = 2*kappa*(eta^2 - tau*mu) / (eta^2 + kappa*tau)
    ell   = (4*gamma^2 + mu^2) / (2*alpha*gamma) + 2*alpha^2/lambda1
    """
    tau = theoretical_threshold(p)
    mu = p.mu
    eta2 = p.eta**2
    rho = 4.0 * (mu + p.kappa) / (p.alpha * eta2 + p.alpha * p.kappa * tau)
    sigma = 2.0 * p.kappa * (eta2 - tau * mu) / (eta2 + p.kappa * tau)
    ell = (4.0 * p.gamma**2 + mu**2) / (2.0 * p.alpha * p.gamma) + 2.0 * p.alpha**2 / p.lambda1
    return ProofConstants(rho=rho, sigma=sigma, ell=ell)


def equivalence_condition(p: SystemParams, rho: float) -> bool:
    """Condition under which the Lyapunov functional is equivalent to the energy.

    For mu > 0: eta^2 > mu/(alpha*lambda1) and
    rho > 2*mu*lambda1 / (alpha*eta^2*lambda1 - mu).  For mu <= 0 both
    conditions degenerate and eta != 0 suffices.
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    mu = p.mu
    if mu <= 0:
        return p.eta != 0
    eta2 = p.eta**2
    if not eta2 > mu / (p.alpha * p.lambda1):
        return False
    return rho > 2.0 * mu * p.lambda1 / (p.alpha * eta2 * p.lambda1 - mu)
