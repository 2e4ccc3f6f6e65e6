"""Newtonian estimate of how a gas decoheres superpositions of gravitational field strengths.

Gamma = n L^4 (pi m / (2 k_B T))^(3/2), read in CGS with hbar = 1; the
coherence between field strengths g and g' then decays as
exp(-Gamma t (g - g')^2).  Only the accumulated many-collision result is
modelled, not the single-particle trajectories.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .constants import G_STANDARD, K_B
from .errors import DomainError
from .scattering import M_AIR, P_ATM, T_ROOM, gaussian_damping


@dataclass(frozen=True)
class GravityScenario:
    n: float  # cm^-3
    L: float  # cm
    m: float  # g
    T: float  # K
    t: float  # s
    notes: str = ""

    def __post_init__(self):
        for name in ("n", "L", "m", "T", "t"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")


def air_scenario(L=1.0, t=1.0) -> GravityScenario:
    """Air at 1 atm and 300 K (ideal-gas density P/(k_B T), mean molecular mass 28.97 u)."""
    n = P_ATM / (K_B * T_ROOM)
    return GravityScenario(n, L, M_AIR, T_ROOM, t,
                           notes=f"n=P/(k_B T) with P={P_ATM:g} dyn/cm^2, T={T_ROOM} K; m=28.97 u={M_AIR:.5g} g")


def gravity_rate(s: GravityScenario) -> float:
    return s.n * s.L**4 * (math.pi * s.m / (2 * K_B * s.T)) ** 1.5


def gravity_decoherence_factor(g, gPrime, Gamma, t):
    if t < 0:
        raise DomainError("time must be nonnegative")
    return gaussian_damping(Gamma, t, g - gPrime)


class CoherenceWidth(NamedTuple):
    dg_abs: float  # cm s^-2
    dg_rel: float


def coherence_width(s: GravityScenario) -> CoherenceWidth:
    """Field-strength separation where coherence has fallen to 1/e, absolute and relative to g."""
    dg = (gravity_rate(s) * s.t) ** -0.5
    return CoherenceWidth(dg, dg / G_STANDARD)


GRAVITY_COLUMNS = ("n", "L", "m", "T", "t", "Gamma", "dgAbs", "dgRel")


def gravity_row(s: GravityScenario):
    w = coherence_width(s)
    return (s.n, s.L, s.m, s.T, s.t, gravity_rate(s), w.dg_abs, w.dg_rel)
