"""Physical constants (CGS) and numerical tolerances shared across modules.

Everything in the evolution engine and the Zeno/chiral code runs in natural
units (hbar = 1).  The constants below are only needed where a quantity is
quoted in laboratory units: the decoherence/relaxation ratio, the localization
rate presets and the gravitational estimate.
"""
from dataclasses import dataclass, field

from scipy import constants as _si

# CODATA values converted from SI to CGS.
HBAR = _si.hbar * 1e7  # erg s
K_B = _si.k * 1e7  # erg / K
C = _si.c * 1e2  # cm / s
G_STANDARD = _si.g * 1e2  # cm / s^2
AMU = _si.atomic_mass * 1e3  # g

# hbar*c/k_B in cm K; thermal photon wavenumber is k_B T / (hbar c).
KTH_PER_KELVIN = K_B / (HBAR * C)


@dataclass(frozen=True)
class CGSConstants:
    hbar: float = HBAR
    k_B: float = K_B
    c: float = C
    g: float = G_STANDARD
    amu: float = AMU


@dataclass
class Tolerances:
    """Numerical tolerances; instances may be overridden per call or globally."""

    norm: float = 1e-12
    hermitian: float = 1e-12
    trace: float = 1e-10
    positivity: float = -1e-8
    schmidt_reconstruct: float = 1e-10
    degenerate_weight: float = 1e-12
    grid_hermitian: float = 1e-10
    grid_trace: float = 1e-8
    boundary_leak: float = 1e-8
    fock_norm: float = 1e-10
    fock_tail: float = 1e-8
    extra: dict = field(default_factory=dict)


CONSTANTS = CGSConstants()
TOL = Tolerances()


def natural_to_cgs_length(x, mass_g, energy_erg):
    """Length unit sqrt(hbar^2 / (m E)) in cm; multiply natural-unit lengths by it."""
    return x * HBAR / (mass_g * energy_erg) ** 0.5
