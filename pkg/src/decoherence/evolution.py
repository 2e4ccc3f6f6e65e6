"""Grid density-matrix evolution for the pure-decoherence and Caldeira-Leggett equations.

rho(x, x') lives on a uniform 1-D grid in natural units (hbar = 1, k_B = 1).
The generator, written as d rho / dt, is

    -i/(2m) (d2/dx'2 - d2/dx2) rho  -  Lambda (x - x')^2 rho
        + gamma (x - x') (d/dx' - d/dx) rho

where the last term is present only for Caldeira-Leggett runs.  Derivatives
are second-order central differences with second-order one-sided stencils on
the boundary rows.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .constants import HBAR, K_B, TOL
from .errors import ConfigurationError, DomainError, DomainEscapeError, InvalidStateError

log = logging.getLogger(__name__)

SCHEMES = ("rk4", "split")

# RK4 stability radius along the negative real / imaginary axis is ~2.78 / 2.83.
RK4_STABILITY = 2.5


@dataclass(frozen=True)
class GridSpec:
    xMin: float
    xMax: float
    nPoints: int

    def __post_init__(self):
        if not self.xMax > self.xMin:
            raise ConfigurationError(f"xMax ({self.xMax}) must exceed xMin ({self.xMin})")
        if int(self.nPoints) != self.nPoints or self.nPoints < 8:
            raise ConfigurationError(f"nPoints must be an integer >= 8, got {self.nPoints}")

    @property
    def dx(self):
        return (self.xMax - self.xMin) / (self.nPoints - 1)

    @property
    def x(self):
        return np.linspace(self.xMin, self.xMax, self.nPoints)

    @property
    def length(self):
        return self.xMax - self.xMin


def first_derivative_matrix(n, h):
    d = np.zeros((n, n))
    i = np.arange(1, n - 1)
    d[i, i + 1] = 1.0
    d[i, i - 1] = -1.0
    d[0, :3] = (-3.0, 4.0, -1.0)
    d[-1, -3:] = (1.0, -4.0, 3.0)
    return d / (2 * h)


def second_derivative_matrix(n, h):
    d = np.zeros((n, n))
    i = np.arange(1, n - 1)
    d[i, i - 1] = 1.0
    d[i, i] = -2.0
    d[i, i + 1] = 1.0
    d[0, :4] = (2.0, -5.0, 4.0, -1.0)
    d[-1, -4:] = (-1.0, 4.0, -5.0, 2.0)
    return d / h**2


@dataclass(frozen=True, eq=False)
class GridDensityMatrix:
    grid: GridSpec
    values: np.ndarray
    check: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        n = self.grid.nPoints
        if v.shape != (n, n):
            raise ConfigurationError(f"values must be {n}x{n}, got {v.shape}")
        object.__setattr__(self, "values", v)
        if self.check:
            self.validate()

    def validate(self):
        v = self.values
        herm = np.max(np.abs(v - v.conj().T))
        if herm > TOL.grid_hermitian:
            raise InvalidStateError(f"grid density matrix not Hermitian (deviation {herm:.3e})")
        tr = self.trace()
        if abs(tr - 1.0) > TOL.grid_trace:
            raise InvalidStateError(f"grid trace {tr!r} != 1")
        leak = boundary_leak(v)
        if leak > TOL.boundary_leak:
            raise DomainEscapeError(f"state does not fit the box: boundary/peak density {leak:.3e}")

    def trace(self) -> float:
        return float(np.real(np.trace(self.values)) * self.grid.dx)

    def purity(self) -> float:
        op = self.values * self.grid.dx
        return float(np.real(np.sum(op * op.T)))

    def operator(self) -> np.ndarray:
        """Matrix of the density operator in the discrete position basis (unit trace)."""
        return self.values * self.grid.dx

    def min_eigenvalue(self) -> float:
        op = self.operator()
        return float(np.linalg.eigvalsh(0.5 * (op + op.conj().T))[0])

    def offdiagonal_peak(self) -> float:
        """max |rho(x, x')| over the anti-diagonal region |x - x'| > half the box."""
        return float(np.max(np.abs(self.values) * _far_mask(self.grid)))


def _far_mask(grid):
    x = grid.x
    return np.abs(x[:, None] - x[None, :]) > 0.25 * grid.length


def boundary_leak(values):
    diag = np.abs(np.real(np.diag(values)))
    peak = diag.max()
    if peak <= 0:
        return math.inf
    return max(diag[0], diag[-1]) / peak


# --- initial states ----------------------------------------------------------

def _normalized_rho(grid, psi):
    psi = psi / math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
    rho = np.outer(psi, psi.conj())
    return GridDensityMatrix(grid, 0.5 * (rho + rho.conj().T))


def gaussian_wavefunction(grid, x0=0.0, p0=0.0, sigma=1.0):
    x = grid.x
    return (2 * math.pi * sigma**2) ** -0.25 * np.exp(-((x - x0) ** 2) / (4 * sigma**2) + 1j * p0 * x)


def gaussian_packet(grid: GridSpec, x0=0.0, p0=0.0, sigma=1.0) -> GridDensityMatrix:
    """Pure Gaussian packet with position spread sigma, centre x0, mean momentum p0."""
    return _normalized_rho(grid, gaussian_wavefunction(grid, x0, p0, sigma))


def two_packet_superposition(grid: GridSpec, separation, phase=0.0, sigma=1.0, x0=0.0, p0=0.0) -> GridDensityMatrix:
    """(|x0 - d/2> + e^{i phase} |x0 + d/2>) Gaussian cat, normalized on the grid."""
    left = gaussian_wavefunction(grid, x0 - separation / 2, p0, sigma)
    right = gaussian_wavefunction(grid, x0 + separation / 2, p0, sigma)
    return _normalized_rho(grid, left + np.exp(1j * phase) * right)


# --- parameters -----------------------------------------------------------

@dataclass(frozen=True)
class EvolutionParams:
    """Run parameters.  ``mass=math.inf`` switches the kinetic term off.

    ``lam=None`` means Lambda = m * gamma * T (Caldeira-Leggett); the pure
    decoherence equation treats None as zero.
    """

    mass: float
    lam: float | None = None
    gamma: float = 0.0
    temperature: float = 0.0
    dt: float = 1e-3
    steps: int = 100
    scheme: str = "rk4"
    record_every: int = 1
    check_every: int = 1

    def __post_init__(self):
        if not self.mass > 0:
            raise ConfigurationError(f"mass must be positive, got {self.mass}")
        if self.lam is not None and self.lam < 0:
            raise ConfigurationError(f"lambda must be nonnegative, got {self.lam}")
        if self.gamma < 0 or self.temperature < 0:
            raise ConfigurationError("gamma and temperature must be nonnegative")
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 0:
            raise ConfigurationError(f"steps must be a nonnegative integer, got {self.steps}")
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.record_every < 1 or self.check_every < 1:
            raise ConfigurationError("record_every and check_every must be >= 1")

    def effective_lambda(self, caldeira_leggett: bool) -> float:
        if self.lam is not None:
            return self.lam
        if caldeira_leggett and math.isfinite(self.mass):
            return self.mass * self.gamma * self.temperature
        return 0.0


def stability_diagnostics(grid: GridSpec, p: EvolutionParams, caldeira_leggett: bool) -> list[str]:
    """Human-readable reasons the step size is unsafe; empty if it is fine."""
    msgs = []
    h = grid.dx
    bound = 0.25 * p.mass * h**2
    if p.dt > bound:
        msgs.append(f"dt={p.dt:g} violates the stability bound dt <= 0.25*m*dx^2 = {bound:.6g}")
    lam = p.effective_lambda(caldeira_leggett)
    gamma = p.gamma if caldeira_leggett else 0.0
    stiff = gamma * grid.length / h
    if p.scheme == "rk4":
        stiff += lam * grid.length**2
    if p.dt * stiff > RK4_STABILITY:
        msgs.append(f"dt={p.dt:g} too large for the damping terms: dt*(Lambda L^2 + gamma L/dx) = "
                    f"{p.dt * stiff:.4g} > {RK4_STABILITY}")
    return msgs


# --- integrator ---------------------------------------------------------------

def _d1_rows(f, h):
    """D1 @ f without forming D1."""
    out = np.empty_like(f)
    out[1:-1] = f[2:] - f[:-2]
    out[0] = -3 * f[0] + 4 * f[1] - f[2]
    out[-1] = f[-3] - 4 * f[-2] + 3 * f[-1]
    return out / (2 * h)


def _d2_rows(f, h):
    """D2 @ f without forming D2."""
    out = np.empty_like(f)
    out[1:-1] = f[2:] - 2 * f[1:-1] + f[:-2]
    out[0] = 2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]
    out[-1] = -f[-4] + 4 * f[-3] - 5 * f[-2] + 2 * f[-1]
    return out / h**2


class _Generator:
    def __init__(self, grid, mass, lam, gamma):
        x = grid.x
        self.h = grid.dx
        self.xi = x[:, None] - x[None, :]
        self.xi2 = self.xi**2
        self.kin = None if math.isinf(mass) else 1.0 / (2 * mass)
        self.lam = lam
        self.gamma = gamma

    def unitary_and_friction(self, rho):
        h = self.h
        out = np.zeros_like(rho)
        if self.kin is not None:
            # rho @ D2.T - D2 @ rho
            out += -1j * self.kin * (_d2_rows(rho.T, h).T - _d2_rows(rho, h))
        if self.gamma:
            out += self.gamma * self.xi * (_d1_rows(rho.T, h).T - _d1_rows(rho, h))
        return out

    def full(self, rho):
        out = self.unitary_and_friction(rho)
        if self.lam:
            out -= self.lam * self.xi2 * rho
        return out


def _rk4(f, y, dt):
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


class Summary(NamedTuple):
    t: float
    trace: float
    purity: float
    mean_x: float
    mean_p: float
    offdiag_peak: float


@dataclass
class Trajectory:
    grid: GridSpec
    params: EvolutionParams
    equation: str
    lam: float
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    min_eigenvalues: list = field(default_factory=list)
    workers: int = 1

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i) -> GridDensityMatrix:
        return GridDensityMatrix(self.grid, self.states[i], check=False)

    @property
    def final(self) -> GridDensityMatrix:
        return self[-1]

    def summary(self) -> list[Summary]:
        out = []
        for t, v in zip(self.times, self.states):
            g = GridDensityMatrix(self.grid, v, check=False)
            m = moments(g)
            out.append(Summary(t, g.trace(), g.purity(), m.x, m.p, g.offdiagonal_peak()))
        return out

    def metadata(self) -> dict:
        return {
            "equation": self.equation,
            "grid": {"xMin": self.grid.xMin, "xMax": self.grid.xMax, "nPoints": self.grid.nPoints},
            "params": {k: getattr(self.params, k) for k in self.params.__dataclass_fields__},
            "lambda_effective": self.lam,
            "scheme": self.params.scheme,
            "workers": self.workers,
            "min_eigenvalue": min(self.min_eigenvalues) if self.min_eigenvalues else None,
        }


def _evolve(rho0: GridDensityMatrix, p: EvolutionParams, caldeira_leggett: bool) -> Trajectory:
    grid = rho0.grid
    msgs = stability_diagnostics(grid, p, caldeira_leggett)
    if msgs:
        raise ConfigurationError("; ".join(msgs))
    lam = p.effective_lambda(caldeira_leggett)
    gamma = p.gamma if caldeira_leggett else 0.0
    gen = _Generator(grid, p.mass, lam, gamma)
    equation = "caldeira-leggett" if caldeira_leggett else "pure-decoherence"
    traj = Trajectory(grid, p, equation, lam)

    half_factor = np.exp(-0.5 * lam * gen.xi2 * p.dt) if p.scheme == "split" else None

    def step(rho):
        if half_factor is None:
            return _rk4(gen.full, rho, p.dt)
        rho = rho * half_factor
        if gen.kin is not None or gen.gamma:
            rho = _rk4(gen.unitary_and_friction, rho, p.dt)
        return rho * half_factor

    def record(t, rho):
        traj.times.append(t)
        traj.states.append(rho.copy())
        if caldeira_leggett:
            lam_min = GridDensityMatrix(grid, rho, check=False).min_eigenvalue()
            traj.min_eigenvalues.append(lam_min)
            if lam_min < TOL.positivity:
                log.warning("negative eigenvalue %.3e at t=%g (Caldeira-Leggett is not positivity preserving)",
                            lam_min, t)

    rho = np.array(rho0.values, dtype=complex)
    record(0.0, rho)
    for k in range(1, p.steps + 1):
        rho = step(rho)
        if k % p.check_every == 0 or k == p.steps:
            leak = boundary_leak(rho)
            if leak > TOL.boundary_leak:
                raise DomainEscapeError(
                    f"density reached the grid edge at step {k} (boundary/peak {leak:.3e})", step=k)
        if k % p.record_every == 0 or k == p.steps:
            record(k * p.dt, rho)
    return traj


def evolve_pure_decoherence(rho0: GridDensityMatrix, p: EvolutionParams) -> Trajectory:
    """Free motion plus Gaussian localization; gamma is ignored."""
    if p.gamma:
        p = replace(p, gamma=0.0)
    return _evolve(rho0, p, caldeira_leggett=False)


def evolve_caldeira_leggett(rho0: GridDensityMatrix, p: EvolutionParams) -> Trajectory:
    """Quantum Brownian motion; Lambda defaults to m * gamma * T."""
    return _evolve(rho0, p, caldeira_leggett=True)


class Moments(NamedTuple):
    x: float
    p: float
    x2: float
    p2: float
    imag_residue: float


def moments(rho: GridDensityMatrix) -> Moments:
    """<x>, <p>, <x^2>, <p^2> with p = -i d/dx as central differences."""
    grid = rho.grid
    op = rho.operator()
    x = grid.x
    diag = np.real(np.diag(op))
    n, h = grid.nPoints, grid.dx
    d1 = first_derivative_matrix(n, h)
    d2 = second_derivative_matrix(n, h)
    mean_p = -1j * np.trace(d1 @ op)
    mean_p2 = -np.trace(d2 @ op)
    residue = max(abs(mean_p.imag), abs(mean_p2.imag))
    return Moments(float(diag @ x), float(mean_p.real), float(diag @ x**2), float(mean_p2.real), float(residue))


def free_gaussian_variance(sigma, mass, t):
    """Position variance of a free minimum-uncertainty packet: sigma^2 + (t / (2 m sigma))^2."""
    return sigma**2 + (t / (2 * mass * sigma)) ** 2


class MomentOracle(NamedTuple):
    mean_x: float
    mean_p: float


def caldeira_leggett_moments(x0, p0, mass, gamma, t) -> MomentOracle:
    """Closed-form first moments: d<p>/dt = -2 gamma <p>, d<x>/dt = <p>/m."""
    decay = math.exp(-2 * gamma * t)
    if gamma == 0:
        return MomentOracle(x0 + p0 * t / mass, p0)
    return MomentOracle(x0 + p0 * (1 - decay) / (2 * gamma * mass), p0 * decay)


class RatioResult(NamedTuple):
    ratio: float
    lambda_th_cm: float


def decoherence_relaxation_ratio(mass_g, T_K, dx_cm) -> RatioResult:
    """m k_B T dx^2 / hbar^2 in CGS, together with lambda_th = hbar / sqrt(m k_B T)."""
    if not (mass_g > 0 and T_K > 0):
        raise DomainError("mass and temperature must be positive")
    if dx_cm < 0:
        raise DomainError("separation must be nonnegative")
    lam_th = HBAR / math.sqrt(mass_g * K_B * T_K)
    return RatioResult((dx_cm / lam_th) ** 2, lam_th)


def snapshot_rows(traj: Trajectory):
    """One row per recorded time: t followed by |rho| flattened row-major."""
    for t, v in zip(traj.times, traj.states):
        yield [t, *np.abs(v).ravel()]


SUMMARY_COLUMNS = ("t", "trace", "purity", "mean_x", "mean_p", "offdiag_peak")
