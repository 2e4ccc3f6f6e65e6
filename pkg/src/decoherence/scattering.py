"""Collisional localization: rates, Gaussian coherence damping, and environment presets.

Units are CGS with hbar absorbed into the wavenumber, so a localization rate
carries cm^-2 s^-1 and ``rate * t * dx**2`` is dimensionless.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import zeta

from .constants import AMU, C, HBAR, K_B, KTH_PER_KELVIN
from .errors import DomainError


@dataclass(frozen=True)
class ScatteringEnvironment:
    name: str
    k: float  # cm^-1
    flux: float  # cm^-2 s^-1
    sigmaEff: float  # cm^2
    notes: str = ""

    def __post_init__(self):
        for field in ("k", "flux", "sigmaEff"):
            value = getattr(self, field)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{field} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class LocalizationRate:
    value: float  # cm^-2 s^-1

    def __post_init__(self):
        if not self.value > 0:
            raise DomainError(f"localization rate must be positive, got {self.value!r}")

    def __float__(self):
        return float(self.value)


def localization_rate(env: ScatteringEnvironment) -> LocalizationRate:
    """k^2 * flux * sigma_eff."""
    return LocalizationRate(env.k**2 * env.flux * env.sigmaEff)


def gaussian_damping(rate, t, separation):
    """exp(-rate * t * separation^2).  Shared by the spatial and gravitational estimators."""
    return np.exp(-rate * t * np.square(separation))


def decoherence_factor(dx, lam, t):
    """Factor multiplying rho(x, x') after time t for separation dx = x - x'."""
    lam = float(lam)
    if np.any(np.asarray(t) < 0):
        raise DomainError("time must be nonnegative")
    if lam < 0:
        raise DomainError("localization rate must be nonnegative")
    return gaussian_damping(lam, t, dx)


def single_scattering_overlap(dx, k):
    """<chi|S_x'^dagger S_x|chi> for one scattering event, isotropic Gaussian model.

    exp(-k^2 dx^2 / 2): unity for k dx << 1, vanishing once a single scattered
    wave resolves the separation.
    """
    if not k > 0:
        raise DomainError(f"wavenumber must be positive, got {k!r}")
    return np.exp(-0.5 * (k * np.asarray(dx)) ** 2).astype(complex)


def coherence_length(lam, t):
    """Separation at which the damping factor reaches 1/e: (lam t)^(-1/2)."""
    lt = float(lam) * float(t)
    if not lt > 0:
        raise DomainError(f"lambda * t must be positive, got {lt!r}")
    return lt**-0.5


def saturated_decoherence_rate(env: ScatteringEnvironment, dx):
    """Decoherence rate for separation dx with the short-wavelength cap applied.

    Once one scattering event resolves dx, the rate cannot exceed the
    collision rate flux * sigma_eff.
    """
    lam = localization_rate(env).value
    return np.minimum(lam * np.square(dx), env.flux * env.sigmaEff)


# --- preset catalog --------------------------------------------------------

SIZES_CM = (1e-3, 1e-5, 1e-6)

# Orders of magnitude of the reference localization-rate table (cm^-2 s^-1).
TABLE_TARGETS = {
    "cosmic background radiation": (1e6, 1e-6, 1e-12),
    "300 K photons": (1e19, 1e12, 1e6),
    "sunlight (on earth)": (1e21, 1e17, 1e13),
    "air molecules": (1e36, 1e32, 1e30),
    "laboratory vacuum": (1e23, 1e19, 1e17),
}

T_CMB = 2.725  # K
T_SUN = 5772.0  # K, effective photospheric temperature
SOLAR_CONSTANT = 1.361e6  # erg cm^-2 s^-1
T_ROOM = 300.0
P_ATM = 1.01325e6  # dyn cm^-2
M_AIR = 28.97 * AMU  # g, mean molecular mass of dry air
N_VACUUM = 1e3  # cm^-3


@dataclass(frozen=True)
class Preset:
    env: ScatteringEnvironment
    environment: str
    size: float  # cm
    lambda_table: float
    regime: str  # "rayleigh" or "geometric"

    @property
    def lambda_computed(self) -> float:
        return localization_rate(self.env).value

    @property
    def log10_error(self) -> float:
        return abs(math.log10(self.lambda_computed) - math.log10(self.lambda_table))

    @property
    def short_wavelength(self) -> bool:
        """True when k a > 1: one collision already resolves the object, Lambda overestimates."""
        return self.env.k * self.size > 1.0


def _planck_moment(n):
    """<k^n> / k_th^n for a Planck photon-number spectrum."""
    return _gamma(n + 3) * zeta(n + 3) / (_gamma(3) * zeta(3))


def _photon_env(label, temperature, a, dilution=1.0, extra=""):
    kth = KTH_PER_KELVIN * temperature
    density = 2 * zeta(3) / math.pi**2 * kth**3 * dilution  # = 20.29 T^3 cm^-3 undiluted
    flux = density * C
    k6 = _planck_moment(6) ** (1 / 6) * kth
    if k6 * a < 1.0:
        k = k6
        sigma = 8 * math.pi / 9 * k**4 * a**6
        regime = "rayleigh"
        note = (f"blackbody T={temperature} K; photon density 2 zeta(3)/pi^2 (k_B T/hbar c)^3 x {dilution:.4g}; "
                f"flux n c; k=<k^6>^(1/6)={k:.4g}/cm; long-wavelength cross section (8 pi/9) k^4 a^6")
    else:
        k = kth
        sigma = math.pi * a**2
        regime = "geometric"
        note = (f"blackbody T={temperature} K; photon density x {dilution:.4g}; flux n c; "
                f"k=k_B T/(hbar c)={k:.4g}/cm; geometric cross section pi a^2")
    if extra:
        note = f"{note}; {extra}"
    return ScatteringEnvironment(f"{label}, a={a:g} cm", k, flux, sigma, note), regime


def _gas_env(label, density, a):
    v = math.sqrt(8 * K_B * T_ROOM / (math.pi * M_AIR))
    k = M_AIR * v / HBAR
    note = (f"ideal gas n={density:.4g}/cm^3, m={M_AIR:.4g} g, T={T_ROOM} K; mean speed sqrt(8kT/pi m)={v:.4g} cm/s; "
            f"k=m v/hbar; flux n v; geometric cross section pi a^2")
    return ScatteringEnvironment(f"{label}, a={a:g} cm", k, density * v, math.pi * a**2, note), "geometric"


@lru_cache(maxsize=1)
def _catalog():
    sun_mean_energy = math.pi**4 / (30 * zeta(3)) * K_B * T_SUN
    sun_flux = SOLAR_CONSTANT / sun_mean_energy
    kth_sun = KTH_PER_KELVIN * T_SUN
    sun_dilution = sun_flux / (2 * zeta(3) / math.pi**2 * kth_sun**3 * C)
    air_density = P_ATM / (K_B * T_ROOM)

    presets = []
    for env_name, targets in TABLE_TARGETS.items():
        for a, target in zip(SIZES_CM, targets):
            if env_name == "cosmic background radiation":
                env, regime = _photon_env(env_name, T_CMB, a)
            elif env_name == "300 K photons":
                env, regime = _photon_env(env_name, T_ROOM, a)
            elif env_name == "sunlight (on earth)":
                env, regime = _photon_env(
                    env_name, T_SUN, a, sun_dilution,
                    f"dilution fixed by solar constant {SOLAR_CONSTANT:g} erg/cm^2/s")
            elif env_name == "air molecules":
                env, regime = _gas_env(env_name, air_density, a)
            else:
                env, regime = _gas_env(env_name, N_VACUUM, a)
            presets.append(Preset(env, env_name, a, target, regime))
    return tuple(presets)


def preset_environments() -> list[Preset]:
    """The 15 reference presets (5 environments x 3 object sizes)."""
    return list(_catalog())


def find_preset(environment: str, size: float) -> Preset:
    for p in _catalog():
        if p.environment == environment and math.isclose(p.size, size, rel_tol=1e-9):
            return p
    raise KeyError(f"no preset for {environment!r} at a={size}")


PRESET_COLUMNS = ("name", "size", "k", "flux", "sigma_eff", "lambda_computed", "lambda_paper", "log10_error")


def preset_rows(presets=None):
    for p in presets if presets is not None else _catalog():
        yield (p.env.name, p.size, p.env.k, p.env.flux, p.env.sigmaEff,
               p.lambda_computed, p.lambda_table, p.log10_error)


def write_preset_csv(path, presets=None):
    from .io import write_csv

    return write_csv(path, PRESET_COLUMNS, preset_rows(presets))
