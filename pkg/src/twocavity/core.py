"""Parameters, single-excitation amplitudes and the delocalized-mode transform.

Two cavities of frequency ``omega_f`` exchange photons at rate ``A``; each
holds a two-level atom at ``omega_a = omega_f + delta`` coupled with
strength ``g``. Frequencies are usually quoted in units of ``g`` and times
in units of ``1/g``.

The single-excitation state is

    a |gg,10> + b |gg,01> + c |eg,00> + d |ge,00>

and the delocalized amplitudes are ``alpha_j = a + (-1)**j b`` and
``beta_j = c + (-1)**j d``. The transform carries no 1/sqrt(2), so
``|a|^2 + |b|^2 = (|alpha_1|^2 + |alpha_2|^2) / 2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


class SingularityError(ValueError):
    """A closed-form quantity diverges at these parameters.

    Raised where an effective model is undefined, e.g. ``G`` when an atom is
    resonant with a delocalized field mode.
    """


@dataclass(frozen=True)
class SystemParams:
    g: float = 1.0
    A: float = 0.0
    delta: float = 0.0
    omega_f: float = 0.0

    def __post_init__(self):
        for name in ("g", "A", "delta", "omega_f"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}")

    @property
    def omega_a(self) -> float:
        return self.omega_f + self.delta

    @property
    def delta1(self) -> float:
        return self.delta + self.A

    @property
    def delta2(self) -> float:
        return self.delta - self.A

    def scaled(self, factor: float) -> "SystemParams":
        """All frequencies multiplied by ``factor``."""
        return SystemParams(
            g=self.g * factor,
            A=self.A * factor,
            delta=self.delta * factor,
            omega_f=self.omega_f * factor,
        )

    def to_dict(self) -> dict:
        return {"g": self.g, "A": self.A, "delta": self.delta, "omega_f": self.omega_f}


@dataclass(frozen=True)
class LocalAmplitudes:
    a: complex = 0j
    b: complex = 0j
    c: complex = 0j
    d: complex = 0j

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=complex)

    @classmethod
    def from_array(cls, values) -> "LocalAmplitudes":
        a, b, c, d = (complex(v) for v in values)
        return cls(a, b, c, d)

    def weight(self) -> float:
        """Total single-excitation probability."""
        return float(np.sum(np.abs(self.as_array()) ** 2))


@dataclass(frozen=True)
class DelocalizedAmplitudes:
    alpha1: complex = 0j
    alpha2: complex = 0j
    beta1: complex = 0j
    beta2: complex = 0j

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha1, self.alpha2, self.beta1, self.beta2], dtype=complex)

    @classmethod
    def from_array(cls, values) -> "DelocalizedAmplitudes":
        a1, a2, b1, b2 = (complex(v) for v in values)
        return cls(a1, a2, b1, b2)


@dataclass(frozen=True)
class QubitState:
    """``cos(theta)|g> + exp(i phi) sin(theta)|e>`` prepared on atom 1."""

    theta: float = math.pi / 2
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 2):
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not (0.0 <= self.phi < 2 * math.pi):
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")

    @property
    def excited_amplitude(self) -> complex:
        return cmath.exp(1j * self.phi) * math.sin(self.theta)

    @property
    def ground_amplitude(self) -> float:
        return math.cos(self.theta)

    def initial_amplitudes(self) -> LocalAmplitudes:
        return LocalAmplitudes(c=self.excited_amplitude)


def detunings(params: SystemParams) -> tuple[float, float]:
    """Detunings of the atoms from the two delocalized field modes."""
    return params.delta1, params.delta2


def rabi_frequency(params: SystemParams, j: int) -> float:
    """Generalized Rabi frequency ``sqrt((delta_j / 2)**2 + g**2)`` of sector ``j``."""
    if j == 1:
        dj = params.delta1
    elif j == 2:
        dj = params.delta2
    else:
        raise ValueError(f"mode index must be 1 or 2, got {j!r}")
    return math.hypot(dj / 2, params.g)


def dispersive_G(params: SystemParams) -> float:
    d1, d2 = detunings(params)
    # the product can underflow even when neither factor is zero
    if d1 * d2 == 0:
        raise SingularityError(
            f"dispersive coupling undefined: delta1={d1}, delta2={d2} "
            "(atoms resonant with a delocalized field mode)"
        )
    return params.g**2 / (d1 * d2)


def beat_frequency(params: SystemParams) -> float:
    """Phase-rotation mismatch ``delta2/2 + g**2/delta1`` of the two atomic modes."""
    d1, d2 = detunings(params)
    if d1 == 0:
        raise SingularityError("beat frequency undefined for delta1 = 0")
    return d2 / 2 + params.g**2 / d1


def to_delocalized(local: LocalAmplitudes) -> DelocalizedAmplitudes:
    return DelocalizedAmplitudes(
        alpha1=local.a - local.b,
        alpha2=local.a + local.b,
        beta1=local.c - local.d,
        beta2=local.c + local.d,
    )


def to_local(deloc: DelocalizedAmplitudes) -> LocalAmplitudes:
    return LocalAmplitudes(
        a=(deloc.alpha2 + deloc.alpha1) / 2,
        b=(deloc.alpha2 - deloc.alpha1) / 2,
        c=(deloc.beta2 + deloc.beta1) / 2,
        d=(deloc.beta2 - deloc.beta1) / 2,
    )


# Array forms of the transform; the last axis holds (a, b, c, d) or
# (alpha1, alpha2, beta1, beta2).
def local_to_delocalized_array(x: np.ndarray) -> np.ndarray:
    a, b, c, d = np.moveaxis(np.asarray(x), -1, 0)
    return np.stack([a - b, a + b, c - d, c + d], axis=-1)


def delocalized_to_local_array(y: np.ndarray) -> np.ndarray:
    a1, a2, b1, b2 = np.moveaxis(np.asarray(y), -1, 0)
    return np.stack([(a2 + a1) / 2, (a2 - a1) / 2, (b2 + b1) / 2, (b2 - b1) / 2], axis=-1)
