"""Coin-walker entanglement in 1D discrete-time quantum walks."""

from .asymptotics import asymptotic_reduced_state, closed_form_schmidt, momentum_space_evolution
from .entanglement import (
    BlochState,
    SchmidtPair,
    bloch_vector,
    reduced_coin_density,
    schmidt_coefficients,
    schmidt_norm,
)
from .sequences import (
    F,
    H,
    Coin,
    evaluate_sequence,
    format_sequence,
    generalized_universal_sequence,
    parse_sequence,
    phase_compensated_sequence,
    universal_sequence,
)
from .walk import InitialStateParams, WalkerCoinState, evolve, initial_state, step

__version__ = "0.1.0"

__all__ = [
    "BlochState",
    "Coin",
    "asymptotic_reduced_state",
    "closed_form_schmidt",
    "momentum_space_evolution",
    "F",
    "H",
    "InitialStateParams",
    "SchmidtPair",
    "WalkerCoinState",
    "bloch_vector",
    "evaluate_sequence",
    "evolve",
    "format_sequence",
    "generalized_universal_sequence",
    "initial_state",
    "parse_sequence",
    "phase_compensated_sequence",
    "reduced_coin_density",
    "schmidt_coefficients",
    "schmidt_norm",
    "step",
    "universal_sequence",
]
