"""Backend dispatch and population time series."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .core import LocalAmplitudes, QubitState, SystemParams
from .effective import RegimeKind, RegimeModel, model_trajectory
from .exact import ExactPropagator
from .oracle import (
    EigenPropagator,
    HamiltonianMatrix,
    build_fock_hamiltonian,
    embed_local,
    extract_local,
)

BACKENDS = ("exact", "oracle", "dispersive", "resonant", "near-resonant")

COLUMNS = (
    "t",
    "p_atom1",
    "p_atom2",
    "p_cav1",
    "p_cav2",
    "p_field_total",
    "p_mode_m1",
    "p_mode_m2",
    "norm",
)


@dataclass(frozen=True)
class Trajectory:
    """Single-excitation amplitudes over time, plus the rest of the state's weight.

    ``other_weight`` is the probability outside the single-excitation
    subspace: the untouched ``cos(theta)|gg,00>`` part of a qubit state.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    other_weight: np.ndarray


class OracleEvolver:
    """Fock-space evolution of single-excitation states, diagonalized once."""

    def __init__(self, params: SystemParams, n_max: int = 1):
        self.hamiltonian: HamiltonianMatrix = build_fock_hamiltonian(params, n_max)
        self.propagator = EigenPropagator.from_hamiltonian(self.hamiltonian)

    def states(self, init: LocalAmplitudes, times, vacuum: complex = 0.0) -> np.ndarray:
        psi0 = embed_local(self.hamiltonian, init, vacuum)
        return self.propagator.trajectory(psi0, times)

    def local(self, init: LocalAmplitudes, times) -> np.ndarray:
        return extract_local(self.hamiltonian, self.states(init, times))


def make_evolver(model: str, params: SystemParams, n_max: int = 1, mirrored: bool = False):
    """Return ``evolve(init: LocalAmplitudes, times) -> (len(times), 4) array``."""
    if model == "exact":
        return ExactPropagator(params).local_trajectory
    if model == "oracle":
        return OracleEvolver(params, n_max).local
    if model in ("dispersive", "resonant", "near-resonant"):
        regime = RegimeModel(RegimeKind(model), params, mirrored=mirrored)
        return lambda init, times: model_trajectory(regime, init, times)
    raise ValueError(f"unknown model {model!r}; choose from {', '.join(BACKENDS)}")


def run(model: str, params: SystemParams, init, times, n_max: int = 1, mirrored: bool = False) -> Trajectory:
    """Evolve ``init`` (a qubit or single-excitation amplitudes) over ``times``."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if isinstance(init, QubitState):
        local, vacuum = init.initial_amplitudes(), init.ground_amplitude
    else:
        local, vacuum = init, 0.0
    if model == "oracle":
        evolver = OracleEvolver(params, n_max)
        states = evolver.states(local, t, vacuum)
        amps = extract_local(evolver.hamiltonian, states)
        other = np.sum(np.abs(states) ** 2, axis=1) - np.sum(np.abs(amps) ** 2, axis=1)
    else:
        amps = make_evolver(model, params, n_max, mirrored)(local, t)
        other = np.full(t.shape, abs(vacuum) ** 2)
    return Trajectory(times=t, amplitudes=amps, other_weight=other)


def population(model: str, params: SystemParams, init, which: int = 3, n_max: int = 1, mirrored: bool = False):
    """Vectorized ``t -> |x_which(t)|^2``; ``which`` indexes ``(a, b, c, d)``."""
    local = init.initial_amplitudes() if isinstance(init, QubitState) else init
    evolve = make_evolver(model, params, n_max, mirrored)
    return lambda times: np.abs(evolve(local, times)[:, which]) ** 2


@dataclass(frozen=True)
class TimeSeries:
    rows: np.ndarray
    columns: tuple[str, ...] = COLUMNS

    @classmethod
    def from_trajectory(cls, traj: Trajectory, time_scale: float = 1.0) -> "TimeSeries":
        a, b, c, d = traj.amplitudes.T
        pa, pb, pc, pd = (np.abs(x) ** 2 for x in (a, b, c, d))
        rows = np.column_stack(
            [
                traj.times * time_scale,
                pc,
                pd,
                pa,
                pb,
                pa + pb,
                np.abs(a - b) ** 2 / 2,
                np.abs(a + b) ** 2 / 2,
                pa + pb + pc + pd + traj.other_weight,
            ]
        )
        return cls(rows=rows)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(format_number(x) for x in row) + "\n")
        return buf.getvalue()

    def to_json(self, config: dict) -> str:
        doc = {
            "config": config,
            "columns": list(self.columns),
            "rows": [[float(x) for x in row] for row in self.rows],
        }
        return json.dumps(doc, indent=1) + "\n"


def format_number(x: float) -> str:
    return format(float(x), ".17g")
