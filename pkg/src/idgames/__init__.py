"""Identity games: optimal classical, no-signaling and quantum winning probabilities."""

from .game import (
    Box,
    DeterministicStrategy,
    GameFunction,
    InputDistribution,
    Scenario,
    decode_input,
    encode_input,
    evaluate_deterministic,
    winning_probability,
)
from .classical import optimal_classical
from .nosignaling import facet_check, is_decomposable, is_extremal, is_no_signaling, optimal_ns
from .quantum import QuantumStrategy, born_box, quantum_value, seesaw
from .symmetry import apply, canonical_form, enumerate_classes
from .census import run_census
from .counting import empirical_gap_sample, encoding_bound, parity_box

__version__ = "0.1.0"
