"""Von Neumann measurements, improper mixtures, Zeno survival and chiral stabilization."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .constants import TOL
from .errors import (ConfigurationError, DomainError, InvalidBasisError,
                     InvalidEnvironmentError, InvalidOperatorError, InvalidStateError,
                     ShapeError)
from .quantum_core import BipartiteState, DensityMatrix, StateVector

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class MeasurementInteraction:
    """H_int = sum_n |n><n| (x) A_n, summarized by where each A_n sends the ready state."""

    systemBasis: tuple
    pointerStates: dict
    initialPointer: StateVector

    def __post_init__(self):
        basis = tuple(self.systemBasis)
        if not basis:
            raise ShapeError("systemBasis must be nonempty")
        missing = [n for n in basis if n not in self.pointerStates]
        if missing:
            raise ShapeError(f"no pointer state for system labels {missing}")
        dims = {self.pointerStates[n].dim for n in basis} | {self.initialPointer.dim}
        if len(dims) != 1:
            raise ShapeError(f"pointer states live in different spaces: dims {sorted(dims)}")
        object.__setattr__(self, "systemBasis", basis)

    def pointer_matrix(self) -> np.ndarray:
        return np.array([self.pointerStates[n].amplitudes for n in self.systemBasis])


def apply_measurement(coeffs, mi: MeasurementInteraction) -> BipartiteState:
    """sum_n c_n |n> |Phi_0>  ->  sum_n c_n |n> |Phi_n>."""
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if c.size != len(mi.systemBasis):
        raise ShapeError(f"{c.size} coefficients for {len(mi.systemBasis)} system states")
    norm = float(np.sum(np.abs(c) ** 2))
    if abs(norm - 1.0) > TOL.norm:
        raise InvalidStateError(f"coefficients not normalized: sum|c|^2 = {norm!r}")
    return BipartiteState(c[:, None] * mi.pointer_matrix())


@dataclass(frozen=True, eq=False)
class OverlapMatrix:
    """Gram matrix <E_n|E_m> of the environment states correlated with |n>."""

    entries: np.ndarray

    def __post_init__(self):
        g = np.array(self.entries, dtype=complex)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ShapeError(f"overlap matrix must be square, got {g.shape}")
        if np.max(np.abs(g - g.conj().T)) > 1e-12:
            raise InvalidEnvironmentError("overlap matrix not Hermitian")
        if np.max(np.abs(np.diag(g) - 1)) > 1e-12:
            raise InvalidEnvironmentError("overlap matrix must have unit diagonal")
        if np.any(np.abs(g) > 1 + 1e-12):
            raise InvalidEnvironmentError("overlaps must have modulus <= 1")
        if np.linalg.eigvalsh(g)[0] < -1e-10:
            raise InvalidEnvironmentError("overlap matrix is not positive semidefinite")
        object.__setattr__(self, "entries", g)

    @classmethod
    def from_states(cls, states):
        m = np.array([s.amplitudes for s in states])
        return cls(m.conj() @ m.T)


def local_density_matrix(coeffs, overlaps: OverlapMatrix, labels=None) -> DensityMatrix:
    """Reduced state of sum_n c_n |n>|E_n>: rho_nm = c_n conj(c_m) <E_m|E_n>."""
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if not isinstance(overlaps, OverlapMatrix):
        overlaps = OverlapMatrix(overlaps)
    g = overlaps.entries
    if g.shape[0] != c.size:
        raise ShapeError(f"{c.size} coefficients for a {g.shape[0]}x{g.shape[0]} overlap matrix")
    # g[n, m] = <E_n|E_m>, so <E_m|E_n> = g[m, n] = g.T[n, m]
    rho = np.outer(c, c.conj()) * g.T
    return DensityMatrix(labels if labels is not None else tuple(range(c.size)), rho)


# --- Zeno -------------------------------------------------------------------

def _check_hermitian(h):
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidOperatorError(f"operator must be square, got shape {h.shape}")
    dev = np.max(np.abs(h - h.conj().T))
    if dev > 1e-12 * max(1.0, np.max(np.abs(h))):
        raise InvalidOperatorError(f"operator not Hermitian (deviation {dev:.3e})")
    return h


def _amps(u):
    a = u.amplitudes if isinstance(u, StateVector) else np.asarray(u, dtype=complex)
    if abs(np.vdot(a, a).real - 1) > TOL.norm:
        raise InvalidStateError("state not normalized")
    return a


def energy_variance(h, u) -> float:
    """(Delta H)^2 = <u|H^2|u> - <u|H|u>^2."""
    h = _check_hermitian(h)
    a = _amps(u)
    ha = h @ a
    return float(np.vdot(ha, ha).real - np.vdot(a, ha).real ** 2)


class Survival(NamedTuple):
    exact: float
    approx: float


def survival_probability(h, u, t) -> Survival:
    """|<u|exp(-iHt)|u>|^2 and its short-time form 1 - (Delta H)^2 t^2."""
    h = _check_hermitian(h)
    a = _amps(u)
    amp = np.vdot(a, expm(-1j * h * t) @ a)
    return Survival(float(abs(amp) ** 2), 1.0 - energy_variance(h, a) * t**2)


def zeno_survival(h, u, t, N: int) -> Survival:
    """Survival after N equally spaced projective checks of |u> within [0, t].

    Each round evolves the renormalized surviving branch for t/N, projects onto
    span{u} and multiplies in the branch probability.  ``approx`` is
    [1 - (Delta H)^2 (t/N)^2]^N.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"number of measurements must be an integer >= 1, got {N}")
    N = int(N)
    h = _check_hermitian(h)
    a = _amps(u)
    step = expm(-1j * h * (t / N))
    proj = np.outer(a, a.conj())
    psi = a.copy()
    log_prob = 0.0
    for _ in range(N):
        psi = proj @ (step @ psi)
        p = np.vdot(psi, psi).real
        if p <= 0:
            log_prob = -math.inf
            break
        log_prob += math.log(p)
        psi /= math.sqrt(p)
    base = 1.0 - energy_variance(h, a) * (t / N) ** 2
    approx = base**N if base > 0 else 0.0
    return Survival(math.exp(log_prob), float(approx))


def exponential_decay_survival(rate, t, N: int = 1) -> float:
    """(exp(-rate t / N))^N.

    The N factors are combined in the exponent, which is where the product
    collapses to exp(-rate t); raising the rounded per-interval factor to the
    N-th power would instead amplify its rounding error N-fold.
    """
    if rate < 0:
        raise DomainError("decay rate must be nonnegative")
    if int(N) != N or N < 1:
        raise DomainError(f"number of observations must be an integer >= 1, got {N}")
    return math.exp(N * (-rate * t / N))


# --- chiral molecules -----------------------------------------------------

def chiral_states(one: StateVector, two: StateVector) -> tuple[StateVector, StateVector]:
    """|L> = (|1> + |2>)/sqrt2, |R> = (|1> - |2>)/sqrt2."""
    a, b = one.amplitudes, two.amplitudes
    if a.shape != b.shape:
        raise InvalidBasisError("states live in different spaces")
    gram = np.array([[np.vdot(a, a), np.vdot(a, b)], [np.vdot(b, a), np.vdot(b, b)]])
    if np.max(np.abs(gram - np.eye(2))) > 1e-10:
        raise InvalidBasisError("input states are not orthonormal")
    s = 1 / math.sqrt(2)
    return (StateVector(one.labels, s * (a + b)), StateVector(one.labels, s * (a - b)))


def chiral_hamiltonian(V, E=0.0) -> np.ndarray:
    """Two-level Hamiltonian in the energy basis {|1>, |2>}.

    Tunnelling V between |L> and |R> splits the energy levels by 2V; E is an
    energy offset of |R> relative to |L> (chiral asymmetry).
    """
    L = np.array([1, 1]) / math.sqrt(2)
    R = np.array([1, -1]) / math.sqrt(2)
    h_lr = V * (np.outer(L, R) + np.outer(R, L)) + E * np.outer(R, R)
    return h_lr.astype(complex)


def chirality_operator() -> np.ndarray:
    """|L><L| - |R><R| in the {|1>, |2>} basis, i.e. sigma_x."""
    return SIGMA_X.copy()


def to_chiral_basis(rho) -> np.ndarray:
    u = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)  # rows: <L|, <R|
    return u @ rho @ u.conj().T


class ChiralTrajectory(NamedTuple):
    times: np.ndarray
    states: np.ndarray  # (n_t, 2, 2) in the energy basis

    @property
    def rho_LL(self):
        return np.array([to_chiral_basis(r)[0, 0].real for r in self.states])

    @property
    def rho_LR(self):
        return np.array([to_chiral_basis(r)[0, 1] for r in self.states])


def chiral_generator(h2, rate):
    """Superoperator (row-major vec) of -i[H, .] - (rate/4)[sigma_L, [sigma_L, .]].

    With sigma_L^2 = 1 the dissipator equals (rate/2)(sigma_L rho sigma_L - rho),
    so chiral coherences decay at exactly ``rate``.
    """
    eye = np.eye(2)
    s = chirality_operator()
    h = np.asarray(h2, dtype=complex)
    comm = np.kron(h, eye) - np.kron(eye, h.T)
    dissip = np.kron(s, s.T) - np.kron(eye, eye)
    return -1j * comm + 0.5 * rate * dissip


def chiral_decoherence_run(h2, dephasingRate, rho0, tMax, dt) -> ChiralTrajectory:
    """Evolve a 2x2 density matrix under chiral dephasing; exact propagator per step."""
    if dephasingRate < 0:
        raise DomainError("dephasing rate must be nonnegative")
    h2 = _check_hermitian(h2)
    if h2.shape != (2, 2):
        raise ShapeError("chiral runs need a two-level Hamiltonian")
    if not dt > 0 or not tMax >= 0:
        raise ConfigurationError("dt must be positive and tMax nonnegative")
    rho = rho0.entries if isinstance(rho0, DensityMatrix) else np.asarray(rho0, dtype=complex)
    # uniform steps no longer than dt that land exactly on tMax
    steps = max(1, math.ceil(tMax / dt - 1e-9)) if tMax > 0 else 0
    dt = tMax / steps if steps else dt
    prop = expm(chiral_generator(h2, dephasingRate) * dt)
    out = np.empty((steps + 1, 2, 2), dtype=complex)
    vec = rho.reshape(-1).astype(complex)
    out[0] = rho
    for k in range(1, steps + 1):
        vec = prop @ vec
        out[k] = vec.reshape(2, 2)
    return ChiralTrajectory(np.arange(steps + 1) * dt, out)
