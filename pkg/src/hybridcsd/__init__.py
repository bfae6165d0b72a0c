"""Cosine-sine decomposition synthesis of unitaries on hybrid-dimension qudit registers."""

from .circuit import (
    Circuit,
    ControlledGivens,
    ControlledUnitary,
    GateCounts,
    Multiplexer,
    ShiftGate,
    SingleQuditGate,
    UniformlyControlledGivens,
    count_gates,
    gate_unitary,
    predicted_level_count,
)
from .decomposition import lateral_decompose, reorder_to_control, select_control, synthesize
from .linalg import CSDResult, block_diag, csd, is_unitary, random_unitary
from .lowering import lower_circuit, lower_multiplexer, lower_ucg, normalize_controls
from .simulator import StateVector, apply_circuit, apply_gate, equivalence, reconstruct

__all__ = [
    "CSDResult",
    "Circuit",
    "ControlledGivens",
    "ControlledUnitary",
    "GateCounts",
    "Multiplexer",
    "ShiftGate",
    "SingleQuditGate",
    "StateVector",
    "UniformlyControlledGivens",
    "apply_circuit",
    "apply_gate",
    "block_diag",
    "count_gates",
    "csd",
    "equivalence",
    "gate_unitary",
    "is_unitary",
    "lateral_decompose",
    "lower_circuit",
    "lower_multiplexer",
    "lower_ucg",
    "normalize_controls",
    "predicted_level_count",
    "random_unitary",
    "reconstruct",
    "reorder_to_control",
    "select_control",
    "synthesize",
]
