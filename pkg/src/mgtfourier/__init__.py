"""Stability toolkit for a heat-coupled third-order-in-time wave system.

Computes theoretical and numerical stability thresholds, exponential
decay/growth rates, Lyapunov-functional decay certificates, and modal
trajectory simulations for the MGT-Fourier thermoelastic system.
"""

__version__ = "0.1.0"

from .charpoly import (
    Cubic,
    ModeRate,
    Quartic,
    RootSet,
    build_mgt_cubic,
    build_quartic,
    decay_rate_mode,
    decay_rate_spectrum,
    hurwitz_stable,
    modal_system_matrix,
    roots,
    spectral_abscissa,
    tau_star,
)
from .energy import Certificate, ModeState, QuadraticForm, certified_rate
from .errors import CertificateError, NumericalFailure, UnfitWindow, UnsupportedRegime
from .params import (
    ProofConstants,
    Regime,
    SystemParams,
    classify_regime,
    equivalence_condition,
    proof_constants,
    stability_predicate,
    theoretical_threshold,
    theoretical_threshold_1d,
)
from .simulate import SpectrumSpec, Trajectory, simulate_mode, simulate_superposition

__all__ = [
    "Certificate",
    "CertificateError",
    "Cubic",
    "ModeRate",
    "ModeState",
    "NumericalFailure",
    "ProofConstants",
    "QuadraticForm",
    "Quartic",
    "Regime",
    "RootSet",
    "SpectrumSpec",
    "SystemParams",
    "Trajectory",
    "UnfitWindow",
    "UnsupportedRegime",
    "build_mgt_cubic",
    "build_quartic",
    "certified_rate",
    "classify_regime",
    "decay_rate_mode",
    "decay_rate_spectrum",
    "equivalence_condition",
    "hurwitz_stable",
    "modal_system_matrix",
    "proof_constants",
    "roots",
    "simulate_mode",
    "simulate_superposition",
    "spectral_abscissa",
    "stability_predicate",
    "tau_star",
    "theoretical_threshold",
    "theoretical_threshold_1d",
]
