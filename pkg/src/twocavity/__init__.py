"""Dynamics of two coupled cavities, each holding a two-level atom."""

from .core import (
    DelocalizedAmplitudes,
    LocalAmplitudes,
    QubitState,
    SingularityError,
    SystemParams,
    beat_frequency,
    detunings,
    dispersive_G,
    rabi_frequency,
    to_delocalized,
    to_local,
)
from .dynamics import TimeSeries, run
from .effective import RegimeKind, RegimeMismatchError, RegimeModel, ValidityWarning
from .exact import ExactPropagator, evolve_exact, evolve_exact_local
from .oracle import EigenPropagator, build_fock_hamiltonian, build_single_excitation_hamiltonian
from .transfer import Regime, TransferReport, classify_regime, transfer_fidelity

__version__ = "0.1.0"
