"""Two-level system monitored by a pointer: H = V sigma_x + E |2><2| + gamma p (|1><1| - |2><2|).

The pointer has no free Hamiltonian, so p commutes with H and every
pointer-momentum eigenmode carries its own 2x2 problem.  On a periodic grid the
central-difference momentum operator is diagonalized by the FFT with
eigenvalues sin(k dx)/dx; ``run_zeno_toy`` propagates each mode exactly and
reassembles populations and branch overlaps.  ``build_zeno_toy`` assembles the
same operator as a dense matrix for inspection and cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainEscapeError
from .evolution import GridSpec

# regime classifier constants
EARLY_RABI_FRACTION = 0.05
EARLY_RESOLVE_FRACTION = 0.1
MIDDLE_WINDOW = (0.2, 0.8)
QUADRATIC_SLOPE = (2.0, 0.1)
LINEAR_SLOPE = (1.0, 0.2)
SUPPRESSION_FRACTION = 0.1
WINDOW_SAMPLES = 24
EDGE_TOLERANCE = 1e-8


@dataclass(frozen=True)
class ZenoToyParams:
    V: float
    E: float
    gammaCoupling: float
    pointerGrid: GridSpec
    pointerWidth: float = 1.0

    def __post_init__(self):
        if self.V < 0:
            raise ConfigurationError(f"V must be nonnegative, got {self.V}")
        if not self.pointerWidth > 0:
            raise ConfigurationError("pointer width must be positive")

    @property
    def rabi_frequency(self):
        return math.sqrt(self.V**2 + 0.25 * self.E**2)

    @property
    def rabi_period(self):
        """Period of P2(t) = (V/Omega)^2 sin^2(Omega t) for the unmonitored system."""
        om = self.rabi_frequency
        return math.pi / om if om > 0 else math.inf

    @property
    def rabi_max(self):
        om = self.rabi_frequency
        return (self.V / om) ** 2 if om > 0 else 0.0

    @property
    def t_resolve(self):
        """Time for the two pointer branches to separate by one pointer width."""
        g = abs(self.gammaCoupling)
        return self.pointerWidth / g if g > 0 else math.inf


def pointer_grid_for(gamma, t_max, width=1.0, points_per_width=8, margin=8.0):
    """Centred periodic grid wide enough to hold both drifting pointer branches until t_max.

    The lattice momentum sin(k dx)/dx makes the drift velocity gamma*cos(k dx)
    mode dependent, which grows an Airy-type front of width ~ (gamma t dx^2)^(1/3)
    ahead of each branch; the margin covers it.
    """
    h = width / points_per_width
    front = (abs(gamma) * t_max * h**2) ** (1 / 3)
    half = abs(gamma) * t_max + margin * width + 12 * front
    n = 2 * math.ceil(half / h)
    n = max(n, 16)
    return GridSpec(-0.5 * n * h, 0.5 * n * h - h, n)


def momentum_matrix(grid: GridSpec) -> np.ndarray:
    """-i times the periodic central difference: Hermitian, eigenvalues sin(k dx)/dx."""
    n, h = grid.nPoints, grid.dx
    d = np.zeros((n, n))
    i = np.arange(n)
    d[i, (i + 1) % n] = 1.0
    d[i, (i - 1) % n] = -1.0
    return -1j * d / (2 * h)


def momentum_eigenvalues(grid: GridSpec) -> np.ndarray:
    k = 2 * np.pi * np.fft.fftfreq(grid.nPoints, d=grid.dx)
    return np.sin(k * grid.dx) / grid.dx


def resolution_warnings(params: ZenoToyParams, t_max=None) -> list[str]:
    grid = params.pointerGrid
    out = []
    if grid.dx > params.pointerWidth / 2:
        out.append(f"grid spacing {grid.dx:g} does not resolve pointer width {params.pointerWidth:g}")
    if t_max is not None:
        reach = abs(params.gammaCoupling) * t_max + 6 * params.pointerWidth
        if reach > 0.5 * grid.length:
            out.append(f"pointer drift gamma*t={abs(params.gammaCoupling) * t_max:g} plus 6 widths "
                       f"exceeds the half-box {0.5 * grid.length:g}")
    return out


@dataclass
class ZenoToyOperator:
    matrix: np.ndarray
    dim: int
    metadata: dict = field(default_factory=dict)


def build_zeno_toy(params: ZenoToyParams, t_max=None) -> ZenoToyOperator:
    """Dense Hamiltonian on (two-level) (x) (pointer grid); index = level * n + site."""
    n = params.pointerGrid.nPoints
    p = momentum_matrix(params.pointerGrid)
    eye = np.eye(n)
    h0 = np.array([[0.0, params.V], [params.V, params.E]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    h = np.kron(h0, eye) + params.gammaCoupling * np.kron(sz, p)
    meta = {"warnings": resolution_warnings(params, t_max), "basis": "level-major (level * n + site)"}
    return ZenoToyOperator(h, 2 * n, meta)


def initial_pointer(params: ZenoToyParams) -> np.ndarray:
    x = params.pointerGrid.x
    phi = np.exp(-(x**2) / (4 * params.pointerWidth**2)).astype(complex)
    return phi / np.linalg.norm(phi)


class _ModeEvolver:
    """Exact propagation of |1> (x) phi in the momentum eigenbasis of the pointer."""

    def __init__(self, params: ZenoToyParams):
        self.params = params
        self.phi_k = np.fft.fft(initial_pointer(params))
        self.phi_k /= np.linalg.norm(self.phi_k)
        p = momentum_eigenvalues(params.pointerGrid)
        g = params.gammaCoupling
        hk = np.zeros((p.size, 2, 2), dtype=complex)
        hk[:, 0, 0] = g * p
        hk[:, 1, 1] = params.E - g * p
        hk[:, 0, 1] = hk[:, 1, 0] = params.V
        self.evals, self.evecs = np.linalg.eigh(hk)
        # coefficients of |1> in each mode's eigenbasis
        self.c1 = self.evecs[:, 0, :].conj()

    def amplitudes(self, t):
        """Level amplitudes a_j(k, t) for each pointer mode, shape (n, 2)."""
        phase = np.exp(-1j * self.evals * t) * self.c1
        return np.einsum("kjm,km->kj", self.evecs, phase)

    def observables(self, t):
        a = self.amplitudes(t)
        w = np.abs(self.phi_k) ** 2
        p2 = float(np.sum(w * np.abs(a[:, 1]) ** 2))
        chi1 = self.phi_k * a[:, 0]
        chi2 = self.phi_k * a[:, 1]
        n1, n2 = np.linalg.norm(chi1), np.linalg.norm(chi2)
        overlap = complex(np.vdot(chi1, chi2) / (n1 * n2)) if n1 > 0 and n2 > 0 else complex("nan")
        return p2, overlap, chi1, chi2

    def p2(self, t):
        return self.observables(t)[0]


def _edge_fraction(chi_k):
    if not np.any(chi_k):
        return 0.0
    dens = np.abs(np.fft.ifft(chi_k)) ** 2
    return max(dens[0], dens[-1]) / dens.max()


def _loglog_slope(evolver, t_lo, t_hi, samples=WINDOW_SAMPLES):
    if not (t_hi > t_lo > 0):
        return math.nan
    ts = np.geomspace(t_lo, t_hi, samples)
    ps = np.array([evolver.p2(t) for t in ts])
    if np.any(ps <= 0):
        return math.nan
    return float(np.polyfit(np.log(ts), np.log(ps), 1)[0])


def window_bounds(params: ZenoToyParams):
    T = params.rabi_period
    early_hi = min(EARLY_RABI_FRACTION * T, EARLY_RESOLVE_FRACTION * params.t_resolve)
    early = (0.1 * early_hi, early_hi)
    middle = (MIDDLE_WINDOW[0] * T, MIDDLE_WINDOW[1] * T)
    return early, middle


def classify_regime(early_slope, middle_slope, max_p2, rabi_max):
    if max_p2 < SUPPRESSION_FRACTION * rabi_max:
        return "suppressed"
    if abs(middle_slope - LINEAR_SLOPE[0]) <= LINEAR_SLOPE[1]:
        return "linear"
    return "quadratic"


@dataclass
class ZenoToyRecord:
    params: ZenoToyParams
    times: np.ndarray
    p2: np.ndarray
    branch_overlap: np.ndarray
    early_slope: float
    middle_slope: float
    max_p2: float
    regime: str
    warnings: list

    def scan_row(self):
        return (self.params.gammaCoupling, self.params.t_resolve, self.early_slope,
                self.middle_slope, self.max_p2, self.regime)


SCAN_COLUMNS = ("gamma", "tResolve", "earlySlope", "middleSlope", "maxP2", "regimeLabel")


def run_zeno_toy(params: ZenoToyParams, tMax, dt) -> ZenoToyRecord:
    """Evolve |1> (x) Gaussian pointer and classify the transition regime."""
    if not (dt > 0 and tMax > 0):
        raise ConfigurationError("tMax and dt must be positive")
    ev = _ModeEvolver(params)
    steps = max(1, math.ceil(tMax / dt - 1e-9))
    times = np.linspace(0.0, tMax, steps + 1)
    p2 = np.empty(times.size)
    ovl = np.empty(times.size, dtype=complex)
    for i, t in enumerate(times):
        p2[i], ovl[i], chi1, chi2 = ev.observables(t)
        if max(_edge_fraction(chi1), _edge_fraction(chi2)) > EDGE_TOLERANCE:
            raise DomainEscapeError(f"pointer packet reached the grid edge at step {i} (t={t:g})", step=i)
    early, middle = window_bounds(params)
    e_slope = _loglog_slope(ev, *early)
    m_slope = _loglog_slope(ev, *middle)
    max_p2 = float(p2.max())
    regime = classify_regime(e_slope, m_slope, max_p2, params.rabi_max)
    return ZenoToyRecord(params, times, p2, ovl, e_slope, m_slope, max_p2, regime,
                         resolution_warnings(params, tMax))


def gamma_sweep(gammas, V=1.0, E=0.0, width=1.0, tMax=None, dt=None, workers=1):
    """Run the toy model over couplings; each run gets its own grid sized to its drift."""
    gammas = list(gammas)
    probe = ZenoToyParams(V, E, 0.0, GridSpec(-1, 1, 16), width)
    tMax = probe.rabi_period if tMax is None else tMax
    dt = tMax / 200 if dt is None else dt

    def one(g):
        grid = pointer_grid_for(g, tMax, width)
        return run_zeno_toy(ZenoToyParams(V, E, g, grid, width), tMax, dt)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, gammas))
    return [one(g) for g in gammas]
