"""Coherent and cat states in a truncated Fock space, and cat-state dephasing.

The dephasing operation works in the two-component frame {|a>, |-a>}: a state
is a 2x2 coefficient matrix ``c`` meaning sum_ij c_ij |a_i><a_j| with
a_0 = alpha, a_1 = -alpha.  Under cavity damping at rate kappa the amplitudes
shrink to alpha exp(-kappa t / 2) and the cross coefficients pick up
d(t) = exp(-2 |alpha|^2 (1 - exp(-kappa t))).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .constants import TOL
from .errors import ConfigurationError, DomainError, InvalidStateError, TruncationError


def cutoff_rule(alpha) -> int:
    """Smallest cutoff allowed by |alpha|^2 + 6 sqrt(|alpha|^2 + 1)."""
    n = abs(alpha) ** 2
    return max(4, math.ceil(n + 6 * math.sqrt(n + 1)))


def _poisson_tail_prob(alpha, n):
    """|<n|alpha>|^2 for the untruncated coherent state."""
    m = abs(alpha) ** 2
    if m == 0:
        return 1.0 if n == 0 else 0.0
    return math.exp(-m + n * math.log(m) - gammaln(n + 1))


def mandated_cutoff(alpha) -> int:
    """Smallest cutoff meeting both the cutoff rule and the 1e-8 truncation-tail bound."""
    n = cutoff_rule(alpha)
    while _poisson_tail_prob(alpha, n) >= TOL.fock_tail:
        n += 1
    return n


@dataclass(frozen=True, eq=False)
class FockState:
    cutoff: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.cutoff < 4 or a.size != self.cutoff + 1:
            raise ConfigurationError(f"need cutoff >= 4 and cutoff+1 amplitudes, got {self.cutoff}, {a.size}")
        norm = np.vdot(a, a).real
        if abs(norm - 1) > TOL.fock_norm:
            raise InvalidStateError(f"Fock state not normalized: {norm!r}")
        if abs(a[-1]) ** 2 >= TOL.fock_tail:
            raise TruncationError(f"truncation tail |c_cutoff|^2 = {abs(a[-1])**2:.3e} >= {TOL.fock_tail}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    def inner(self, other: "FockState") -> complex:
        if other.cutoff != self.cutoff:
            raise ConfigurationError("states have different cutoffs")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def mean_photon_number(self) -> float:
        n = np.arange(self.cutoff + 1)
        return float(np.sum(n * np.abs(self.amplitudes) ** 2))

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def _coherent_amplitudes(alpha, cutoff):
    n = np.arange(cutoff + 1)
    if alpha == 0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    log_mag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def coherent_state(alpha, cutoff=None) -> FockState:
    """|alpha> truncated at ``cutoff`` photons and renormalized."""
    if cutoff is None:
        cutoff = mandated_cutoff(alpha)
    if cutoff < cutoff_rule(alpha):
        raise TruncationError(f"cutoff {cutoff} below |alpha|^2 + 6 sqrt(|alpha|^2+1) = {cutoff_rule(alpha)}")
    amps = _coherent_amplitudes(complex(alpha), cutoff)
    return FockState(cutoff, amps / np.linalg.norm(amps))


def coherent_overlap(alpha, beta) -> complex:
    """Untruncated <alpha|beta>."""
    alpha, beta = complex(alpha), complex(beta)
    return complex(np.exp(-0.5 * (abs(alpha) ** 2 + abs(beta) ** 2) + alpha.conjugate() * beta))


@dataclass(frozen=True)
class CatSpec:
    alpha: complex
    cutoff: int

    def __post_init__(self):
        if self.cutoff < cutoff_rule(self.alpha):
            raise TruncationError(f"cutoff {self.cutoff} violates the tail-safety rule "
                                  f"(needs >= {cutoff_rule(self.alpha)})")


def cat_normalization(alpha) -> float:
    """N in N(|alpha> + |-alpha>): [2 (1 + exp(-2|alpha|^2))]^(-1/2)."""
    return (2 * (1 + math.exp(-2 * abs(alpha) ** 2))) ** -0.5


def cat_state(spec: CatSpec) -> FockState:
    """Even cat N(|alpha> + |-alpha>) in the Fock basis."""
    a = _coherent_amplitudes(complex(spec.alpha), spec.cutoff)
    b = _coherent_amplitudes(-complex(spec.alpha), spec.cutoff)
    amps = a + b
    amps[1::2] = 0.0  # exact parity; the odd terms cancel analytically
    return FockState(spec.cutoff, amps / np.linalg.norm(amps))


@dataclass(frozen=True, eq=False)
class CatSector:
    """State sum_ij coeffs[i, j] |a_i><a_j| with a = (alpha, -alpha)."""

    alpha: complex
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2, 2):
            raise ConfigurationError("cat sector coefficients must be 2x2")
        if np.max(np.abs(c - c.conj().T)) > 1e-12:
            raise InvalidStateError("cat sector coefficients not Hermitian")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "coeffs", c)

    def gram(self) -> np.ndarray:
        """G[i, j] = <a_i|a_j>."""
        a = (self.alpha, -self.alpha)
        return np.array([[coherent_overlap(x, y) for y in a] for x in a])

    def trace(self) -> float:
        # tr |a_i><a_j| = <a_j|a_i>
        return float(np.real(np.sum(self.coeffs * self.gram().T)))

    def operator_matrix(self) -> np.ndarray:
        """Matrix of rho in the orthonormalized span of {|alpha>, |-alpha>}: S^1/2 c S^1/2."""
        g = self.gram()
        w, v = np.linalg.eigh(g)
        s_half = v @ np.diag(np.sqrt(np.clip(w, 0, None))) @ v.conj().T
        # |a_i> = sum_k (S^1/2)_ki |e_k> for an orthonormal frame |e_k>
        return s_half @ self.coeffs @ s_half

    def to_fock(self, cutoff=None) -> np.ndarray:
        cutoff = mandated_cutoff(self.alpha) if cutoff is None else cutoff
        kets = [_coherent_amplitudes(self.alpha, cutoff), _coherent_amplitudes(-self.alpha, cutoff)]
        return sum(self.coeffs[i, j] * np.outer(kets[i], kets[j].conj()) for i in range(2) for j in range(2))


def cat_sector(alpha) -> CatSector:
    """Pure even cat in the two-component frame."""
    n2 = cat_normalization(alpha) ** 2
    return CatSector(alpha, n2 * np.ones((2, 2)))


def mixture_sector(alpha) -> CatSector:
    """50/50 mixture of |alpha> and |-alpha>."""
    return CatSector(alpha, 0.5 * np.eye(2))


def dephasing_factor(alpha, kappa, t) -> float:
    """exp(-2 |alpha|^2 (1 - exp(-kappa t)))."""
    if t < 0 or kappa < 0:
        raise DomainError("kappa and t must be nonnegative")
    return math.exp(-2 * abs(alpha) ** 2 * -math.expm1(-kappa * t))


def cat_dephase(rho: CatSector, kappa, t) -> CatSector:
    """Couple the cavity to a zero-temperature reservoir for time t.

    Amplitudes relax to alpha exp(-kappa t/2) and the cross terms are damped by
    ``dephasing_factor``; the trace is preserved exactly.
    """
    d = dephasing_factor(rho.alpha, kappa, t)
    c = np.array(rho.coeffs)
    c[0, 1] *= d
    c[1, 0] *= d
    return CatSector(rho.alpha * math.exp(-0.5 * kappa * t), c)


def fringe_visibility(rho: CatSector) -> float:
    """|c_01| / sqrt(c_00 c_11): 1 for the pure cat, 0 for the mixture."""
    c = rho.coeffs
    denom = math.sqrt(max(c[0, 0].real * c[1, 1].real, 0.0))
    return float(abs(c[0, 1]) / denom) if denom > 0 else 0.0


def coherence_time(alpha, kappa) -> float:
    """Time at which the dephasing factor reaches 1/e."""
    x = 1 / (2 * abs(alpha) ** 2)
    if x >= 1:
        return math.inf
    return -math.log1p(-x) / kappa


def amplitude_damping_fock(rho, eta) -> np.ndarray:
    """Apply the pure-loss channel with transmissivity eta = exp(-kappa t) to a Fock density matrix.

    Kraus operators A_l = sum_n sqrt(C(n, l)) eta^((n-l)/2) (1-eta)^(l/2) |n-l><n|.
    """
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    out = np.zeros_like(rho)
    for l in range(dim):
        k = np.zeros((dim, dim))
        for n in range(l, dim):
            k[n - l, n] = math.sqrt(math.comb(n, l) * eta ** (n - l) * (1 - eta) ** l)
        out += k @ rho @ k.T
    return out


VISIBILITY_COLUMNS = ("t", "visibility", "dFactor")


def visibility_curve(alpha, kappa, times):
    rho0 = cat_sector(alpha)
    for t in times:
        yield (t, fringe_visibility(cat_dephase(rho0, kappa, t)), dephasing_factor(alpha, kappa, t))
