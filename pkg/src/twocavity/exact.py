"""Closed-form single-excitation evolution in the delocalized basis.

The Hamiltonian splits into two independent Jaynes-Cummings sectors, one
per delocalized mode pair ``(alpha_j, beta_j)``. Each sector rotates about
``omega_a - delta_j/2`` and Rabi-oscillates at ``nu_j``. Phases are kept
in the laboratory frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DelocalizedAmplitudes,
    LocalAmplitudes,
    SystemParams,
    delocalized_to_local_array,
    local_to_delocalized_array,
    rabi_frequency,
    to_delocalized,
    to_local,
)


def _check_finite(values, what):
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what} must be finite")


@dataclass(frozen=True)
class ExactPropagator:
    params: SystemParams
    detuning: tuple[float, float] = field(init=False)
    nu: tuple[float, float] = field(init=False)
    centre: tuple[float, float] = field(init=False)

    def __post_init__(self):
        p = self.params
        d = (p.delta1, p.delta2)
        object.__setattr__(self, "detuning", d)
        object.__setattr__(self, "nu", (rabi_frequency(p, 1), rabi_frequency(p, 2)))
        object.__setattr__(self, "centre", (p.omega_a - d[0] / 2, p.omega_a - d[1] / 2))

    def sector_matrices(self, times) -> np.ndarray:
        """2x2 sector propagators, shape ``(len(times), 2, 2, 2)``.

        Index order is ``[time, sector, row, col]`` acting on ``(alpha_j, beta_j)``.
        """
        t = np.atleast_1d(np.asarray(times, dtype=float))
        _check_finite(t, "time")
        out = np.empty((t.size, 2, 2, 2), dtype=complex)
        for j in range(2):
            dj, nu, w = self.detuning[j], self.nu[j], self.centre[j]
            phi = nu * t
            cos = np.cos(phi)
            # sin(nu t)/nu, finite as nu -> 0; np.sinc would rescale the
            # argument by pi and drift out of step with cos at large nu t
            sinc = np.sin(phi) / nu if nu > 0 else t.astype(float)
            phase = np.exp(-1j * w * t)
            half = dj / 2
            g = self.params.g
            out[:, j, 0, 0] = phase * (cos + 1j * half * sinc)
            out[:, j, 0, 1] = phase * (-1j * g * sinc)
            out[:, j, 1, 0] = phase * (-1j * g * sinc)
            out[:, j, 1, 1] = phase * (cos - 1j * half * sinc)
        return out

    def delocalized_trajectory(self, init, times) -> np.ndarray:
        """Delocalized amplitudes at each time, shape ``(len(times), 4)``."""
        y0 = init.as_array() if isinstance(init, DelocalizedAmplitudes) else np.asarray(init, complex)
        _check_finite(y0, "initial amplitudes")
        u = self.sector_matrices(times)
        out = np.empty((u.shape[0], 4), dtype=complex)
        for j in range(2):
            alpha, beta = y0[j], y0[2 + j]
            out[:, j] = u[:, j, 0, 0] * alpha + u[:, j, 0, 1] * beta
            out[:, 2 + j] = u[:, j, 1, 0] * alpha + u[:, j, 1, 1] * beta
        return out

    def local_trajectory(self, init, times) -> np.ndarray:
        """Local amplitudes ``(a, b, c, d)`` at each time, shape ``(len(times), 4)``."""
        x0 = init.as_array() if isinstance(init, LocalAmplitudes) else np.asarray(init, complex)
        y = self.delocalized_trajectory(local_to_delocalized_array(x0), times)
        return delocalized_to_local_array(y)


def evolve_exact(prop: ExactPropagator, init: DelocalizedAmplitudes, t: float) -> DelocalizedAmplitudes:
    if not math.isfinite(t):
        raise ValueError("time must be finite")
    return DelocalizedAmplitudes.from_array(prop.delocalized_trajectory(init, [t])[0])


def evolve_exact_local(prop: ExactPropagator, init: LocalAmplitudes, t: float) -> LocalAmplitudes:
    return to_local(evolve_exact(prop, to_delocalized(init), t))
