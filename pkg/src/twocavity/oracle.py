"""Brute-force evolution under the full two-cavity Hamiltonian.

Builds the dense matrix of

    H = sum_j [omega_a |e><e|_j + omega_f a_j^+ a_j + g (a_j s_j+ + a_j^+ s_j-)]
        + A (a_1^+ a_2 + a_2^+ a_1)

either on the four single-excitation states or on a truncated Fock space,
and propagates states through its eigendecomposition. Nothing here uses
the delocalized-mode solution, so it serves as an independent check on it.

Basis states are labelled ``(atom1, atom2, n1, n2)`` with atoms 0 = ground,
1 = excited. In the Fock basis atom 1 varies slowest, then atom 2, n1, n2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import LocalAmplitudes, QubitState, SystemParams

Label = tuple[int, int, int, int]

# Order of the local amplitudes (a, b, c, d).
SINGLE_EXCITATION_BASIS: tuple[Label, ...] = (
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (1, 0, 0, 0),
    (0, 1, 0, 0),
)
VACUUM: Label = (0, 0, 0, 0)


@dataclass(frozen=True)
class HamiltonianMatrix:
    entries: np.ndarray
    basis_labels: tuple[Label, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis_labels)

    @property
    def excitation_numbers(self) -> np.ndarray:
        return np.array([sum(label) for label in self.basis_labels])

    def index(self, label: Label) -> int:
        return self.basis_labels.index(tuple(label))


def _matrix_from_labels(params: SystemParams, labels) -> HamiltonianMatrix:
    labels = tuple(tuple(lab) for lab in labels)
    position = {lab: i for i, lab in enumerate(labels)}
    dim = len(labels)
    h = np.zeros((dim, dim), dtype=complex)
    g, A = params.g, params.A
    for i, (s1, s2, n1, n2) in enumerate(labels):
        h[i, i] = params.omega_a * (s1 + s2) + params.omega_f * (n1 + n2)
        # g a_j s_j+ : photon absorbed by ground-state atom j
        for atom, (s, n) in enumerate(((s1, n1), (s2, n2))):
            if s == 0 and n > 0:
                target = [s1, s2, n1, n2]
                target[atom] = 1
                target[2 + atom] = n - 1
                k = position.get(tuple(target))
                if k is not None:
                    h[k, i] += g * math.sqrt(n)
                    h[i, k] += g * math.sqrt(n)
        # A a_1^+ a_2 : photon hops from cavity 2 into cavity 1
        if n2 > 0:
            k = position.get((s1, s2, n1 + 1, n2 - 1))
            if k is not None:
                amp = A * math.sqrt(n1 + 1) * math.sqrt(n2)
                h[k, i] += amp
                h[i, k] += amp
    return HamiltonianMatrix(entries=h, basis_labels=labels)


def build_single_excitation_hamiltonian(params: SystemParams) -> HamiltonianMatrix:
    """4x4 matrix on ``[|gg,10>, |gg,01>, |eg,00>, |ge,00>]``."""
    return _matrix_from_labels(params, SINGLE_EXCITATION_BASIS)


def fock_basis(n_max: int) -> tuple[Label, ...]:
    return tuple(itertools.product((0, 1), (0, 1), range(n_max + 1), range(n_max + 1)))


def build_fock_hamiltonian(params: SystemParams, n_max: int) -> HamiltonianMatrix:
    """Full Hamiltonian with at most ``n_max`` photons per cavity."""
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"photon cutoff n_max must be an integer >= 1, got {n_max!r}")
    return _matrix_from_labels(params, fock_basis(int(n_max)))


def excitation_number_operator(ham: HamiltonianMatrix) -> np.ndarray:
    return np.diag(ham.excitation_numbers.astype(complex))


@dataclass(frozen=True)
class EigenPropagator:
    """Spectral form of a Hermitian matrix, ``H = V diag(eigenvalues) V^+``.

    The diagonal mean is split off as ``offset`` before diagonalizing so the
    large optical frequency does not eat into the precision of the splittings.
    """

    relative_eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    offset: float = 0.0

    @classmethod
    def from_hamiltonian(cls, ham: HamiltonianMatrix) -> "EigenPropagator":
        h = np.asarray(ham.entries, dtype=complex)
        offset = float(np.mean(np.real(np.diag(h))))
        w, v = np.linalg.eigh(h - offset * np.eye(h.shape[0]))
        return cls(relative_eigenvalues=w, eigenvectors=v, offset=offset)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.relative_eigenvalues + self.offset

    @property
    def dimension(self) -> int:
        return self.eigenvectors.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def trajectory(self, init, times) -> np.ndarray:
        """States at each time, shape ``(len(times), dimension)``."""
        psi0 = np.asarray(init, dtype=complex)
        if psi0.shape != (self.dimension,):
            raise ValueError(f"state has shape {psi0.shape}, expected ({self.dimension},)")
        t = np.atleast_1d(np.asarray(times, dtype=float))
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(psi0))):
            raise ValueError("time and state must be finite")
        v = self.eigenvectors
        coeffs = v.conj().T @ psi0
        phases = np.exp(-1j * np.outer(t, self.relative_eigenvalues))
        return np.exp(-1j * self.offset * t)[:, None] * ((phases * coeffs) @ v.T)


def evolve_numeric(prop: EigenPropagator, init, t: float) -> np.ndarray:
    return prop.trajectory(init, [t])[0]


def embed_local(ham: HamiltonianMatrix, local: LocalAmplitudes, vacuum: complex = 0.0) -> np.ndarray:
    """State vector in ``ham``'s basis from single-excitation amplitudes."""
    psi = np.zeros(ham.dimension, dtype=complex)
    for label, amp in zip(SINGLE_EXCITATION_BASIS, local.as_array()):
        psi[ham.index(label)] = amp
    if vacuum:
        psi[ham.index(VACUUM)] = vacuum
    return psi


def embed_qubit(ham: HamiltonianMatrix, qubit: QubitState) -> np.ndarray:
    return embed_local(ham, qubit.initial_amplitudes(), vacuum=qubit.ground_amplitude)


def extract_local(ham: HamiltonianMatrix, states: np.ndarray) -> np.ndarray:
    """Single-excitation amplitudes ``(a, b, c, d)`` from state vector(s)."""
    idx = [ham.index(label) for label in SINGLE_EXCITATION_BASIS]
    return np.asarray(states)[..., idx]


def block_populations(ham: HamiltonianMatrix, states: np.ndarray) -> dict[int, np.ndarray]:
    """Probability in each total-excitation block, keyed by excitation number."""
    p = np.abs(np.asarray(states)) ** 2
    n = ham.excitation_numbers
    return {int(k): p[..., n == k].sum(axis=-1) for k in np.unique(n)}
