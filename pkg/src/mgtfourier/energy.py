"""Energy functionals as quadratic forms and the decay-certificate machinery.

All functionals on a single mode are quadratic forms on the state
x = (u, v, w, theta), assembled as symmetric 4x4 matrices.  The certificate
pipeline combines the quasienergy W with two auxiliary functionals F and G
into L = W + rho*F + eps^2*G, checks L ~ E, and verifies the matrix
Lyapunov inequality A^T M_L + M_L A + omega*M_E <= 0 per grid eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .charpoly import modal_system_matrix
from .errors import CertificateError
from .params import SystemParams, equivalence_condition, proof_constants
from .util import bisect_root, grid_then_golden

_SYM_TOL = 1e-10


@dataclass(frozen=True)
class ModeState:
    """Per-eigenvalue state (u, v, w, theta) with its eigenvalue lam > 0."""

    u: float
    v: float
    w: float
    theta: float
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        for name in ("u", "v", "w", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def vector(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w, self.theta])


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric 4x4 form over state order (u, v, w, theta)."""

    m: np.ndarray

    def __call__(self, x) -> float:
        x = x.vector() if isinstance(x, ModeState) else np.asarray(x, dtype=float)
        return float(x @ self.m @ x)


@dataclass(frozen=True)
class Certificate:
    """A (possibly invalid) exponential-decay certificate.

    omega_cert = omega / c is the certified energy decay rate; validity is
    encoded in `valid` with human-readable reason codes.
    """

    rho: float
    epsilon: float
    sigma: float
    ell: float
    omega: float
    c: float
    omega_cert: float
    valid: bool
    reasons: tuple


# Selector rows over (u, v, w, theta).
_C1 = np.array([0.0, 1.0, 0.0, 0.0])  # v; v + alpha*u uses _shifted(alpha)
_C4 = np.array([0.0, 0.0, 0.0, 1.0])  # theta


def _outer(row: np.ndarray) -> np.ndarray:
    return np.outer(row, row)


def _sym_cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return 0.5 * (np.outer(a, b) + np.outer(b, a))


def _row_v_plus_alpha_u(alpha: float) -> np.ndarray:
    return np.array([alpha, 1.0, 0.0, 0.0])


def _row_w_plus_alpha_v(alpha: float) -> np.ndarray:
    return np.array([0.0, alpha, 1.0, 0.0])


def _row_v_minus_alpha_u(alpha: float) -> np.ndarray:
    return np.array([-alpha, 1.0, 0.0, 0.0])


def energy_form(alpha: float, lam: float) -> QuadraticForm:
    """Matrix of E(x) = 1/2 [lam(v+a u)^2 + (w+a v)^2 + lam v^2 + theta^2]."""
    m = 0.5 * (
        lam * _outer(_row_v_plus_alpha_u(alpha))
        + _outer(_row_w_plus_alpha_v(alpha))
        + lam * _outer(_C1)
        + _outer(_C4)
    )
    return QuadraticForm(m=m)


def quasienergy_form(p: SystemParams, lam: float) -> QuadraticForm:
    """Matrix of W; indefinite when mu > 0, a pseudoenergy at mu = 0."""
    m = (
        (p.gamma / p.alpha) * lam * _outer(_row_v_plus_alpha_u(p.alpha))
        + _outer(_row_w_plus_alpha_v(p.alpha))
        - (p.mu / p.alpha) * lam * _outer(_C1)
        + _outer(_C4)
    )
    return QuadraticForm(m=m)


def f_form(p: SystemParams, lam: float) -> QuadraticForm:
    """Matrix of F = eta*theta*v + (eta^2/2) lam v^2 + theta^2/(2 lam)."""
    m = (
        p.eta * _sym_cross(_C4, _C1)
        + 0.5 * p.eta**2 * lam * _outer(_C1)
        + (0.5 / lam) * _outer(_C4)
    )
    return QuadraticForm(m=m)


def g_form(alpha: float) -> QuadraticForm:
    """Matrix of G = -(v - alpha*u)(w + alpha*v)."""
    m = -_sym_cross(_row_v_minus_alpha_u(alpha), _row_w_plus_alpha_v(alpha))
    return QuadraticForm(m=m)


def lyapunov_form(p: SystemParams, lam: float, rho: float, epsilon: float) -> QuadraticForm:
    """Matrix of L = W + rho*F + eps^2*G."""
    m = (
        quasienergy_form(p, lam).m
        + rho * f_form(p, lam).m
        + epsilon**2 * g_form(p.alpha).m
    )
    return QuadraticForm(m=m)


def energy_E(x: ModeState, p: SystemParams) -> float:
    """The mode energy; alpha enters through the phase-space norm convention."""
    a = p.alpha
    return 0.5 * (
        x.lam * (x.v + a * x.u) ** 2
        + (x.w + a * x.v) ** 2
        + x.lam * x.v**2
        + x.theta**2
    )


def quasienergy_W(x: ModeState, p: SystemParams) -> float:
    a = p.alpha
    return (
        (p.gamma / a) * x.lam * (x.v + a * x.u) ** 2
        + (x.w + a * x.v) ** 2
        - (p.mu / a) * x.lam * x.v**2
        + x.theta**2
    )


def functional_F(x: ModeState, p: SystemParams) -> float:
    return p.eta * x.theta * x.v + 0.5 * p.eta**2 * x.lam * x.v**2 + x.theta**2 / (2.0 * x.lam)


def functional_G(x: ModeState, p: SystemParams) -> float:
    a = p.alpha
    return -(x.v - a * x.u) * (x.w + a * x.v)


def lyapunov_L(x: ModeState, p: SystemParams, rho: float, epsilon: float) -> float:
    if rho < 0 or epsilon < 0:
        raise ValueError("rho and epsilon must be nonnegative")
    return (
        quasienergy_W(x, p)
        + rho * functional_F(x, p)
        + epsilon**2 * functional_G(x, p)
    )


def omega_of_eps(p: SystemParams, epsilon: float) -> float:
    """Certificate rate at a given multiplier weight epsilon.

    omega = min{ eps^2(gamma/alpha - eps|eta|), eps^2,
                 2(sigma - eps^2*ell - eps^3|eta|),
                 lambda1(2*sigma - 3*eps|eta|) },
    which may be <= 0 when epsilon is too large (flagged by sign, not an
    error).  Only |eta| enters: the underlying Young estimates see the
    coupling through its modulus.
    """
    pc = proof_constants(p)
    ae = abs(p.eta)
    e2 = epsilon**2
    return min(
        e2 * (p.gamma / p.alpha - epsilon * ae),
        e2,
        2.0 * (pc.sigma - e2 * pc.ell - epsilon**3 * ae),
        p.lambda1 * (2.0 * pc.sigma - 3.0 * epsilon * ae),
    )


def _eps_max(p: SystemParams) -> float:
    """Smallest positive epsilon at which a decreasing branch of omega hits 0."""
    pc = proof_constants(p)
    if pc.sigma <= 0:
        raise CertificateError("sigma<=0: threshold condition fails", reason="sigma<=0")
    ae = abs(p.eta)
    candidates = []
    if ae > 0:
        candidates.append(p.gamma / (p.alpha * ae))  # first branch
        candidates.append(2.0 * pc.sigma / (3.0 * ae))  # last branch
    hi = math.sqrt(pc.sigma / pc.ell)
    if ae == 0:
        candidates.append(hi)
    else:
        # third branch: sigma - eps^2*ell - eps^3*|eta|, decreasing in eps
        candidates.append(
            bisect_root(lambda e: pc.sigma - e**2 * pc.ell - e**3 * ae, 0.0, hi)
        )
    return min(candidates)


def omega_b(p: SystemParams):
    """Maximize omega_of_eps over epsilon in (0, eps_max].

    Returns (omega_b, eps_opt).  Coarse 200-point grid locates the bracket,
    golden section refines it (the objective is a min of smooth branches,
    possibly non-smooth at crossings).
    """
    eps_max = _eps_max(p)
    lo = min(1e-6, 0.5 * eps_max)
    eps_opt, value = grid_then_golden(
        lambda e: omega_of_eps(p, e), lo, eps_max, n_grid=200, tol=1e-8
    )
    return value, eps_opt


def default_lambda_grid(p: SystemParams) -> tuple:
    """Default per-mode verification grid {lambda1 * k^2 : k = 1..10}."""
    return tuple(p.lambda1 * k**2 for k in range(1, 11))


def equivalence_constant(
    p: SystemParams, rho: float, epsilon: float, lambda_grid: Sequence[float]
) -> float:
    """Smallest c >= 1 with (1/c) M_E <= M_L <= c M_E on every grid mode.

    Computed from the extreme generalized eigenvalues of the symmetric
    pencil (M_L, M_E); M_E is positive definite by construction.  Raises
    when M_L is indefinite for some eigenvalue.
    """
    c = 1.0
    for lam in lambda_grid:
        me = energy_form(p.alpha, lam).m
        ml = lyapunov_form(p, lam, rho, epsilon).m
        eigs = scipy.linalg.eigh(ml, me, eigvals_only=True)
        if eigs[0] <= 0:
            raise CertificateError(
                f"Lyapunov form indefinite at lambda={lam} "
                f"(smallest pencil eigenvalue {eigs[0]:.3e})",
                reason=f"indefinite-L at lambda={lam}",
            )
        c = max(c, eigs[-1], 1.0 / eigs[0])
    return c


def lyapunov_matrix_margin(
    p: SystemParams, lam: float, rho: float, epsilon: float, omega: float
) -> float:
    """Largest eigenvalue of sym(A^T M_L + M_L A + omega M_E); <= 0 is good."""
    a = modal_system_matrix(p, lam)
    ml = lyapunov_form(p, lam, rho, epsilon).m
    me = energy_form(p.alpha, lam).m
    s = a.T @ ml + ml @ a + omega * me
    s = 0.5 * (s + s.T)
    return float(np.linalg.eigvalsh(s)[-1])


def lyapunov_matrix_check(
    p: SystemParams, lam: float, rho: float, epsilon: float, omega: float
) -> bool:
    """True iff A^T M_L + M_L A + omega*M_E is negative semidefinite.

    Tolerance 1e-10 (scaled by the matrix magnitude) absorbs symmetric
    eigensolver round-off.
    """
    a = modal_system_matrix(p, lam)
    ml = lyapunov_form(p, lam, rho, epsilon).m
    me = energy_form(p.alpha, lam).m
    s = a.T @ ml + ml @ a + omega * me
    s = 0.5 * (s + s.T)
    scale = 1.0 + float(np.abs(s).max())
    return float(np.linalg.eigvalsh(s)[-1]) <= _SYM_TOL * scale


def certified_rate(p: SystemParams, lambda_grid: Sequence[float] | None = None) -> Certificate:
    """Assemble and verify a full decay certificate.

    Valid only if sigma > 0, the equivalence condition holds, M_L is
    positive definite on the grid, and the matrix Lyapunov check passes for
    every grid eigenvalue.  Invalidity is data, carried as reason codes.
    """
    if lambda_grid is None:
        lambda_grid = default_lambda_grid(p)
    lambda_grid = tuple(lambda_grid)
    pc = proof_constants(p)
    reasons: list = []
    nan = float("nan")
    epsilon = omega = c = nan

    if p.eta == 0 and p.mu < 0:
        reasons.append("unsupported-regime: uncoupled subcritical system")
    if pc.sigma <= 0:
        reasons.append("sigma<=0")

    if not reasons:
        omega, epsilon = omega_b(p)
        if not omega > 0:
            reasons.append("omega<=0 at the optimal epsilon")
        if not equivalence_condition(p, pc.rho):
            reasons.append("equivalence condition fails")
        if not reasons:
            try:
                c = equivalence_constant(p, pc.rho, epsilon, lambda_grid)
            except CertificateError as exc:
                reasons.append(str(exc))
        if not reasons:
            for lam in lambda_grid:
                if not lyapunov_matrix_check(p, lam, pc.rho, epsilon, omega):
                    reasons.append(f"lyapunov matrix check fails at lambda={lam}")
                    break

    valid = not reasons
    return Certificate(
        rho=pc.rho,
        epsilon=epsilon,
        sigma=pc.sigma,
        ell=pc.ell,
        omega=omega,
        c=c,
        omega_cert=omega / c if valid else nan,
        valid=valid,
        reasons=tuple(reasons),
    )
