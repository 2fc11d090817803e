"""Fault-tolerant conversion circuits between stabilizer codes."""

from .codes import (
    IabcForm,
    LayoutError,
    StabilizerCode,
    StandardForm,
    apply_gates,
    augment,
    augmented_iabc,
    distance_at_least_3,
    same_group,
    to_iabc,
    to_standard_form,
    validate,
)
from .library import LIBRARY, get_code, parse_code
from .pauli import CliffordGate, ConversionCircuit, PauliOperator, parse_gates
from .synth import (
    ConversionPlan,
    difference_gates,
    order_for_fault_tolerance,
    plan_conversion,
    simplify,
)
from .verify import check_step, verify_circuit

__version__ = "0.1.0"

__all__ = [
    "LIBRARY",
    "CliffordGate",
    "ConversionCircuit",
    "ConversionPlan",
    "IabcForm",
    "LayoutError",
    "PauliOperator",
    "StabilizerCode",
    "StandardForm",
    "apply_gates",
    "augment",
    "augmented_iabc",
    "check_step",
    "difference_gates",
    "distance_at_least_3",
    "get_code",
    "order_for_fault_tolerance",
    "parse_code",
    "parse_gates",
    "plan_conversion",
    "same_group",
    "simplify",
    "to_iabc",
    "to_standard_form",
    "validate",
    "verify_circuit",
]
