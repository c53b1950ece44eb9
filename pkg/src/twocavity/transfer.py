"""State-transfer figures of merit, transfer-time conditions and regime labels.

A qubit ``cos(theta)|g> + exp(i phi) sin(theta)|e>`` starts on atom 1. It has
been transferred when atom 2 holds the same superposition, i.e. when the
single-excitation amplitudes satisfy ``a = b = c = 0`` and ``d = c(0)``.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field

from .core import QubitState, SingularityError, SystemParams, dispersive_G
from .effective import ValidityWarning

DEFAULT_TOLERANCE = 1e-3
DEFAULT_THRESHOLD = 10.0


def transfer_fidelity(qubit: QubitState, T: complex) -> float:
    """Overlap ``|cos^2(theta) + sin^2(theta) T|^2`` with the transferred state.

    ``T = d(t) / c(0)`` is the transfer amplitude from any backend.
    """
    if abs(T) > 1 + 1e-9:
        raise ValueError(f"transfer amplitude must satisfy |T| <= 1, got |T| = {abs(T)}")
    c2 = math.cos(qubit.theta) ** 2
    s2 = math.sin(qubit.theta) ** 2
    return abs(c2 + s2 * T) ** 2


@dataclass(frozen=True)
class TransferReport:
    time: float
    transfer_probability: float
    fidelity: float
    phase_error: float

    @classmethod
    def from_amplitudes(cls, time: float, c0: complex, d: complex, qubit: QubitState) -> "TransferReport":
        if c0 == 0:
            raise ValueError("transfer amplitude undefined for c(0) = 0")
        T = d / c0
        return cls(
            time=time,
            transfer_probability=abs(T) ** 2,
            fidelity=transfer_fidelity(qubit, T),
            phase_error=cmath.phase(T),
        )


@dataclass(frozen=True)
class TransferTime:
    """One candidate transfer time and how well its phase condition is met.

    ``integer`` is the nearest whole number of phase cycles (``m`` for the
    dispersive condition, ``l`` for the resonant one) and ``residual`` the
    leftover fraction of a cycle.
    """

    n: int
    tau: float
    condition_ok: bool
    integer: int
    residual: float


def _nearest(x: float) -> tuple[int, float]:
    k = round(x)
    return int(k), x - k


def dispersive_transfer_times(
    params: SystemParams, n_max: int, tolerance: float = DEFAULT_TOLERANCE
) -> list[TransferTime]:
    """Times ``(2n + 1/2) pi / |G A|`` at which atom 2 is fully excited.

    At these times ``d(tau) = -i s c(0) exp(-i (omega_a + G delta) tau)``
    with ``s = sign(G A)``, so the phase is right when
    ``(omega_a + G delta) tau / pi + s/2`` is an even integer ``2m``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    G = dispersive_G(params)
    rate = G * params.A
    if rate == 0:
        raise SingularityError("no atom-atom exchange when G A = 0")
    sign = math.copysign(1.0, rate)
    rotation = params.omega_a + G * params.delta
    out = []
    for n in range(n_max + 1):
        tau = (2 * n + 0.5) * math.pi / abs(rate)
        m, residual = _nearest((rotation * tau / math.pi + sign / 2) / 2)
        out.append(TransferTime(n, tau, abs(residual) <= tolerance, m, residual))
    return out


def dispersive_ratio(n: int, m: int) -> float:
    """Required ``(omega_a + G delta)/(G A)`` for perfect transfer at index ``n``."""
    return (4 * m - 1) / (4 * n + 1)


def tune_omega_f(g: float, A: float, delta: float, n: int = 0, m: int = 1) -> SystemParams:
    """Cavity frequency that satisfies both dispersive transfer conditions.

    ``G`` does not depend on ``omega_f``, so the ratio condition fixes
    ``omega_a = r G A - G delta`` directly.
    """
    G = dispersive_G(SystemParams(g=g, A=A, delta=delta))
    omega_a = dispersive_ratio(n, m) * G * A - G * delta
    return SystemParams(g=g, A=A, delta=delta, omega_f=omega_a - delta)


def resonant_transfer_times(
    params: SystemParams, n_max: int, tolerance: float = DEFAULT_TOLERANCE
) -> list[TransferTime]:
    """Times ``(2n + 1) pi / g`` for transfer through a resonant field mode.

    When atoms are resonant with the symmetric mode (``delta = A``) the
    transferred amplitude is ``d = -c(0) exp(-i omega_a tau)``, and the phase
    is right when ``omega_a = (2l + 1) g``. For the antisymmetric mode
    (``delta = -A``) the sign flips and the condition is ``omega_a = 2l g``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    g = params.g
    if g == 0:
        raise SingularityError("no resonant transfer without atom-field coupling")
    near = min(abs(params.delta1), abs(params.delta2))
    if near > 0.1 * g:
        warnings.warn(
            f"atoms are detuned by {near:.4g} from the nearest field mode; "
            "resonant transfer times assume |delta -/+ A| << g",
            ValidityWarning,
            stacklevel=2,
        )
    symmetric = abs(params.delta2) <= abs(params.delta1)
    offset = 1.0 if symmetric else 0.0
    out = []
    for n in range(n_max + 1):
        tau = (2 * n + 1) * math.pi / g
        _, residual = _nearest((params.omega_a * tau / math.pi - offset) / 2)
        l, _ = _nearest((params.omega_a / g - offset) / 2)
        out.append(TransferTime(n, tau, abs(residual) <= tolerance, l, residual))
    return out


def entanglement_times(params: SystemParams, n_max: int) -> list[float]:
    """Times ``(n + 1/2) pi / (2 |G A|)`` at which ``|c|^2 = |d|^2 = 1/2``."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    rate = abs(dispersive_G(params) * params.A)
    if rate == 0:
        raise SingularityError("no atom-atom exchange when G A = 0")
    return [(n + 0.5) * math.pi / (2 * rate) for n in range(n_max + 1)]


class Regime(enum.Enum):
    LARGE_HOPPING = "large-hopping"
    LARGE_DETUNING = "large-detuning"
    NEAR_RESONANCE = "near-resonance"
    INTERMEDIATE = "intermediate"
    DECOUPLED = "decoupled"


@dataclass(frozen=True)
class RegimeClassification:
    label: Regime
    ratios: dict = field(default_factory=dict)


def _ratio(num: float, den: float) -> float:
    if den == 0:
        return math.inf if num > 0 else 0.0
    return num / den


def classify_regime(params: SystemParams, threshold: float = DEFAULT_THRESHOLD) -> RegimeClassification:
    """Label the parameter set by which limit, if any, it sits in.

    ``>>`` is read as "at least ``threshold`` times larger". Checked in
    order: decoupled, near resonance, large hopping, large detuning.
    """
    if not threshold > 1:
        raise ValueError(f"threshold must exceed 1, got {threshold}")
    g = params.g
    A, delta = abs(params.A), abs(params.delta)
    near = min(abs(params.delta1), abs(params.delta2))
    far = max(abs(params.delta1), abs(params.delta2))
    ratios = {
        "hopping": _ratio(A, max(delta, g)),
        "detuning": _ratio(delta, max(A, g)),
        "resonance": _ratio(far, max(near, g)),
        "near_detuning": _ratio(near, g),
    }
    if A == 0 or g == 0:
        label = Regime.DECOUPLED
    elif near < g and ratios["resonance"] >= threshold:
        label = Regime.NEAR_RESONANCE
    elif ratios["hopping"] >= threshold:
        label = Regime.LARGE_HOPPING
    elif ratios["detuning"] >= threshold:
        label = Regime.LARGE_DETUNING
    else:
        label = Regime.INTERMEDIATE
    return RegimeClassification(label, ratios)
