"""Closed-form dynamics in the three limiting regimes.

``DISPERSIVE``
    Atoms far from both delocalized field modes (large hopping or large
    detuning). Field and atoms never exchange energy; the atoms swap their
    excitation at rate ``G*A`` with ``G = g**2 / (delta1*delta2)``.
``RESONANT``
    Atoms exactly resonant with field mode 2 (``delta = A``), Stark shift
    from mode 1 neglected. Transfer at ``t = (2n+1) pi / g`` through the field.
``NEAR_RESONANT``
    As above with a small residual detuning ``delta2`` and the mode-1 Stark
    shift kept; transfer peaks beat at ``delta2/2 + g**2/delta1``.

The near-resonant models are only derived for an excitation starting in
atom 1, so they take the initial ``c`` amplitude rather than a full state.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import LocalAmplitudes, SingularityError, SystemParams, beat_frequency, dispersive_G
from .oracle import EigenPropagator, build_single_excitation_hamiltonian


class RegimeKind(enum.Enum):
    DISPERSIVE = "dispersive"
    RESONANT = "resonant"
    NEAR_RESONANT = "near-resonant"


class RegimeMismatchError(ValueError):
    """An evolution routine was handed a model of a different regime."""


class ValidityWarning(UserWarning):
    """Evaluation time is beyond where the effective model can be trusted."""


@dataclass(frozen=True)
class RegimeModel:
    """An effective model bound to a parameter set.

    ``mirrored`` selects the negative-detuning branch of the near-resonant
    models, where atoms sit near field mode 1 instead of mode 2. It swaps
    the roles of ``delta1`` and ``delta2``.
    """

    kind: RegimeKind
    params: SystemParams
    mirrored: bool = False

    def __post_init__(self):
        kind = RegimeKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is RegimeKind.DISPERSIVE:
            dispersive_G(self.params)
        elif kind is RegimeKind.NEAR_RESONANT:
            if self.far_detuning == 0:
                raise SingularityError("near-resonant model needs a non-zero far detuning")

    @property
    def far_detuning(self) -> float:
        """Detuning from the dispersively coupled field mode."""
        return self.params.delta2 if self.mirrored else self.params.delta1

    @property
    def near_detuning(self) -> float:
        """Detuning from the nearly resonant field mode."""
        return self.params.delta1 if self.mirrored else self.params.delta2

    @property
    def G(self) -> float:
        return dispersive_G(self.params)

    @property
    def delta(self) -> float:
        """Beat frequency; zero for the resonant model."""
        if self.kind is RegimeKind.RESONANT:
            return 0.0
        if self.mirrored:
            return self.near_detuning / 2 + self.params.g**2 / self.far_detuning
        return beat_frequency(self.params)

    @property
    def corrected_rabi(self) -> float:
        """``g + near_detuning**2 / 8g``, the second-order Rabi rate."""
        g = self.params.g
        if g == 0:
            return 0.0
        return g + self.near_detuning**2 / (8 * g)

    @property
    def validity_time(self) -> float:
        """Time beyond which the mode-1 Stark shift can no longer be ignored."""
        g = self.params.g
        return math.inf if g == 0 else abs(self.far_detuning) / g**2


def _require(model: RegimeModel, kind: RegimeKind):
    if model.kind is not kind:
        raise RegimeMismatchError(f"expected a {kind.value} model, got {model.kind.value}")


def _times(t):
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise ValueError("time must be finite")
    return arr


def dispersive_trajectory(model: RegimeModel, init, times) -> np.ndarray:
    _require(model, RegimeKind.DISPERSIVE)
    p = model.params
    x0 = init.as_array() if isinstance(init, LocalAmplitudes) else np.asarray(init, complex)
    t = _times(times)
    G = model.G
    field_phase = np.exp(-1j * (p.omega_f - G * p.delta) * t)
    atom_phase = np.exp(-1j * (p.omega_a + G * p.delta) * t)
    cf, sf = np.cos(p.A * t), np.sin(p.A * t)
    ca, sa = np.cos(G * p.A * t), np.sin(G * p.A * t)
    a0, b0, c0, d0 = x0
    return np.stack(
        [
            field_phase * (a0 * cf - 1j * b0 * sf),
            field_phase * (-1j * a0 * sf + b0 * cf),
            atom_phase * (c0 * ca - 1j * d0 * sa),
            atom_phase * (-1j * c0 * sa + d0 * ca),
        ],
        axis=-1,
    )


def resonant_trajectory(model: RegimeModel, init_c: complex, times) -> np.ndarray:
    _require(model, RegimeKind.RESONANT)
    p = model.params
    t = _times(times)
    phase = init_c * np.exp(-1j * p.omega_a * t)
    field = -0.5j * phase * np.sin(p.g * t)
    c = phase * np.cos(p.g * t / 2) ** 2
    d = phase * np.sin(p.g * t / 2) ** 2
    if model.mirrored:
        return np.stack([field, -field, c, d], axis=-1)
    # resonant with the symmetric mode: d = (beta2 - beta1)/2 picks up a minus sign
    return np.stack([field, field, c, -d], axis=-1)


def near_resonant_trajectory(model: RegimeModel, init_c: complex, times, stark: bool = True) -> np.ndarray:
    """Beating transfer for an excitation starting in atom 1.

    ``stark=False`` drops the mode-1 Stark shift from the beat frequency,
    which with ``delta2 = 0`` recovers the resonant model exactly.
    """
    _require(model, RegimeKind.NEAR_RESONANT)
    p = model.params
    t = _times(times)
    if stark and t.size and np.max(np.abs(t)) > 0.1 * model.validity_time:
        warnings.warn(
            f"t = {np.max(np.abs(t)):.4g} exceeds 0.1 |far detuning|/g^2 = "
            f"{0.1 * model.validity_time:.4g}; higher-order dispersive terms may matter",
            ValidityWarning,
            stacklevel=2,
        )
    near = model.near_detuning
    beat = model.delta if stark else near / 2
    # The carrier omega_f + delta_far/2 equals omega_a - delta_near/2, the
    # rotation of the resonant delocalized sector.
    carrier = np.exp(-1j * (p.omega_a - near / 2) * t)
    rabi = model.corrected_rabi * t
    slow = np.exp(-1j * beat * t)
    field = -0.5j * init_c * carrier * np.sin(rabi)
    c = 0.5 * init_c * carrier * (np.cos(rabi) + slow)
    d = 0.5 * init_c * carrier * (np.cos(rabi) - slow)
    if model.mirrored:
        # resonant sector is the antisymmetric one: a = -b and d changes sign
        return np.stack([field, -field, c, -d], axis=-1)
    return np.stack([field, field, c, d], axis=-1)


def evolve_dispersive(model: RegimeModel, init: LocalAmplitudes, t: float) -> LocalAmplitudes:
    return LocalAmplitudes.from_array(dispersive_trajectory(model, init, [t])[0])


def evolve_resonant(model: RegimeModel, init_c: complex, t: float) -> LocalAmplitudes:
    return LocalAmplitudes.from_array(resonant_trajectory(model, init_c, [t])[0])


def evolve_near_resonant(model: RegimeModel, init_c: complex, t: float, stark: bool = True) -> LocalAmplitudes:
    return LocalAmplitudes.from_array(near_resonant_trajectory(model, init_c, [t], stark=stark)[0])


def model_trajectory(model: RegimeModel, init: LocalAmplitudes, times) -> np.ndarray:
    """Local amplitudes of ``model`` over ``times``, shape ``(len(times), 4)``."""
    if model.kind is RegimeKind.DISPERSIVE:
        return dispersive_trajectory(model, init, times)
    if init.a != 0 or init.b != 0 or init.d != 0:
        raise RegimeMismatchError(
            f"{model.kind.value} model only describes an excitation starting in atom 1"
        )
    if model.kind is RegimeKind.RESONANT:
        return resonant_trajectory(model, init.c, times)
    return near_resonant_trajectory(model, init.c, times)


def model_error(model: RegimeModel, init: LocalAmplitudes, t_grid) -> float:
    """Largest ``|x_model - x_oracle|`` over amplitudes and times."""
    t = _times(t_grid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        approx = model_trajectory(model, init, t)
    prop = EigenPropagator.from_hamiltonian(build_single_excitation_hamiltonian(model.params))
    reference = prop.trajectory(init.as_array(), t)
    return float(np.max(np.abs(approx - reference)))
