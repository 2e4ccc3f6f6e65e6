"""Finite-dimensional kinematics: kets, density matrices, Schmidt form, partial trace."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .constants import TOL
from .errors import DomainError, InvalidStateError, PartitionError, ShapeError


def _default_labels(n):
    return tuple(range(n))


@dataclass(frozen=True, eq=False)
class StateVector:
    labels: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        labels = tuple(self.labels) if self.labels is not None else _default_labels(amps.size)
        if amps.size < 1 or amps.size != len(labels):
            raise ShapeError(f"{amps.size} amplitudes for {len(labels)} labels")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > TOL.norm:
            raise InvalidStateError(f"state not normalized: <psi|psi> = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, labels=None, normalize=False):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(labels if labels is not None else _default_labels(amps.size), amps)

    @classmethod
    def basis(cls, labels: Sequence[Hashable], which: Hashable):
        labels = tuple(labels)
        amps = np.zeros(len(labels), dtype=complex)
        amps[labels.index(which)] = 1.0
        return cls(labels, amps)

    @property
    def dim(self):
        return self.amplitudes.size

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.labels, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    labels: tuple
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
        labels = tuple(self.labels) if self.labels is not None else _default_labels(rho.shape[0])
        if len(labels) != rho.shape[0]:
            raise ShapeError(f"{len(labels)} labels for a {rho.shape[0]}-dim matrix")
        herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
        if herm > TOL.hermitian:
            raise InvalidStateError(f"density matrix not Hermitian (deviation {herm:.3e})")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TOL.trace:
            raise InvalidStateError(f"density matrix trace {tr!r} != 1")
        lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if lam_min < TOL.positivity:
            raise InvalidStateError(f"density matrix not positive (min eigenvalue {lam_min:.3e})")
        rho.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def from_array(cls, entries, labels=None):
        entries = np.asarray(entries, dtype=complex)
        return cls(labels if labels is not None else _default_labels(entries.shape[0]), entries)

    @property
    def dim(self):
        return self.entries.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure state sum_nm c_nm |n>_A |m>_B stored as the coefficient matrix."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if c.ndim != 2 or min(c.shape) < 1:
            raise ShapeError(f"coefficients must be a nonempty matrix, got shape {c.shape}")
        norm = float(np.sum(np.abs(c) ** 2))
        if abs(norm - 1.0) > TOL.norm:
            raise InvalidStateError(f"bipartite state not normalized: sum|c|^2 = {norm!r}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def dimA(self):
        return self.coefficients.shape[0]

    @property
    def dimB(self):
        return self.coefficients.shape[1]

    def vector(self) -> np.ndarray:
        return self.coefficients.reshape(-1)

    def density_matrix(self) -> DensityMatrix:
        v = self.vector()
        labels = [(a, b) for a in range(self.dimA) for b in range(self.dimB)]
        return DensityMatrix(labels, np.outer(v, v.conj()))

    def swapped(self) -> "BipartiteState":
        return BipartiteState(self.coefficients.T)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    weights: np.ndarray
    leftVectors: tuple
    rightVectors: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > TOL.trace:
            raise InvalidStateError(f"Schmidt weights must be nonnegative and sum to 1, got {w}")
        if np.any(np.diff(w) > TOL.degenerate_weight):
            raise InvalidStateError("Schmidt weights must be in descending order")
        for vecs in (self.leftVectors, self.rightVectors):
            if len(vecs) != w.size:
                raise ShapeError("one Schmidt vector per weight required")
            if vecs:
                m = np.array([v.amplitudes for v in vecs])
                if np.max(np.abs(m.conj() @ m.T - np.eye(len(vecs)))) > 1e-10:
                    raise InvalidStateError("Schmidt vectors not orthonormal")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "leftVectors", tuple(self.leftVectors))
        object.__setattr__(self, "rightVectors", tuple(self.rightVectors))

    @property
    def rank(self):
        return self.weights.size

    def compose(self) -> BipartiteState:
        """Rebuild sum_n sqrt(p_n) |left_n>|right_n>."""
        left = np.array([v.amplitudes for v in self.leftVectors])
        right = np.array([v.amplitudes for v in self.rightVectors])
        c = np.einsum("n,na,nb->ab", np.sqrt(self.weights), left, right)
        return BipartiteState(c)


def _fix_phase(u, v):
    """Rotate u so its first nonzero amplitude is real positive; push the phase into v."""
    idx = np.flatnonzero(np.abs(u) > 1e-14)
    if idx.size == 0:
        return u, v
    phase = u[idx[0]] / abs(u[idx[0]])
    return u / phase, v * phase


def _lex_key(u):
    return tuple(x for z in np.round(u, 12) for x in (-z.real, -z.imag))


def schmidt_decompose(state: BipartiteState, cutoff: float = 1e-14) -> SchmidtDecomposition:
    """Schmidt form of a pure bipartite state via SVD of its coefficient matrix.

    Weights below ``cutoff`` are dropped.  Each left vector is rotated so that its
    first nonzero amplitude is real and positive, with the compensating phase
    carried by the right vector.  Degenerate weights are ordered
    lexicographically by left-vector amplitudes.
    """
    if not isinstance(state, BipartiteState):
        state = BipartiteState(state)
    u, s, vh = np.linalg.svd(state.coefficients, full_matrices=False)
    weights = s**2
    keep = weights > cutoff
    terms = []
    for n in np.flatnonzero(keep):
        left, right = _fix_phase(u[:, n], vh[n, :])
        terms.append((weights[n], left, right))

    # stable descending sort, then lexicographic ordering inside degenerate groups
    terms.sort(key=lambda t: -t[0])
    ordered, i = [], 0
    while i < len(terms):
        j = i + 1
        while j < len(terms) and abs(terms[j][0] - terms[i][0]) < TOL.degenerate_weight:
            j += 1
        ordered.extend(sorted(terms[i:j], key=lambda t: _lex_key(t[1])))
        i = j

    w = np.array([t[0] for t in ordered])
    w = w / w.sum()
    lefts = tuple(StateVector.from_amplitudes(t[1], normalize=True) for t in ordered)
    rights = tuple(StateVector.from_amplitudes(t[2], normalize=True) for t in ordered)
    return SchmidtDecomposition(w, lefts, rights)


def tensor(rho_a: DensityMatrix, rho_b: DensityMatrix) -> DensityMatrix:
    labels = [(a, b) for a in rho_a.labels for b in rho_b.labels]
    return DensityMatrix(labels, np.kron(rho_a.entries, rho_b.entries))


def partial_trace(rho: DensityMatrix, keep: str, dims: tuple[int, int]) -> DensityMatrix:
    """Reduced density matrix of subsystem ``keep`` ('A' or 'B') of rho on A (x) B."""
    dA, dB = dims
    if rho.dim != dA * dB:
        raise ShapeError(f"rho has dimension {rho.dim}, expected {dA}*{dB}")
    r = rho.entries.reshape(dA, dB, dA, dB)
    keep = str(keep).upper()
    if keep == "A":
        red = np.einsum("ijkj->ik", r)
        pos, n = 0, dA
    elif keep == "B":
        red = np.einsum("ijil->jl", r)
        pos, n = 1, dB
    else:
        raise ShapeError(f"keep must be 'A' or 'B', got {keep!r}")

    labels = None
    if all(isinstance(lbl, tuple) and len(lbl) == 2 for lbl in rho.labels):
        sub = [lbl[pos] for lbl in rho.labels]
        labels = list(dict.fromkeys(sub))
        if len(labels) != n:
            labels = None
    red = 0.5 * (red + red.conj().T)
    return DensityMatrix(labels if labels is not None else _default_labels(n), red)


def entanglement_entropy(sd: SchmidtDecomposition) -> float:
    """Von Neumann entropy in nats of either reduced state, from the Schmidt weights."""
    p = np.asarray(sd.weights, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p))) + 0.0  # no negative zero for pure states


def _block_index(labels, partition):
    where = {}
    for b, block in enumerate(partition):
        for lbl in block:
            if lbl in where:
                raise PartitionError(f"label {lbl!r} appears in more than one block")
            where[lbl] = b
    missing = [lbl for lbl in labels if lbl not in where]
    extra = set(where) - set(labels)
    if missing or extra:
        raise PartitionError(f"partition is not a cover: missing {missing}, unknown {sorted(map(repr, extra))}")
    return np.array([where[lbl] for lbl in labels])


def off_block_mask(labels, partition) -> np.ndarray:
    idx = _block_index(labels, partition)
    return idx[:, None] != idx[None, :]


def coherence_norm(rho: DensityMatrix, partition) -> float:
    """Frobenius norm of the entries of rho lying outside the partition's diagonal blocks."""
    mask = off_block_mask(rho.labels, partition)
    return float(np.linalg.norm(rho.entries[mask]))


def dephase(rho: DensityMatrix, partition, factor: float = 0.0) -> DensityMatrix:
    """Scale all off-block entries by ``factor`` in [0, 1]; factor 0 is full dephasing."""
    if not 0.0 <= factor <= 1.0:
        raise DomainError("dephasing factor must lie in [0, 1]")
    mask = off_block_mask(rho.labels, partition)
    out = np.array(rho.entries)
    out[mask] *= factor
    return DensityMatrix(rho.labels, out)


def random_bipartite(dimA: int, dimB: int, rng: np.random.Generator) -> BipartiteState:
    c = rng.normal(size=(dimA, dimB)) + 1j * rng.normal(size=(dimA, dimB))
    return BipartiteState(c / np.linalg.norm(c))
