"""State networks of the Logistic map in n-bit fixed-point arithmetic."""
__version__ = "0.1.0"

from .fxp_map import (
    ControlParameter,
    DomainError,
    ExactRatio,
    QuantizationMode,
    exact_value,
    logistic_step,
    quantize,
    step_table,
)
from .state_net import (
    ComponentInfo,
    NetworkSummary,
    StateNetwork,
    build_network,
    find_cycles,
    in_degrees,
    summarize,
    tail_length,
    weak_components,
)

__all__ = [
    "ComponentInfo",
    "ControlParameter",
    "DomainError",
    "ExactRatio",
    "NetworkSummary",
    "QuantizationMode",
    "StateNetwork",
    "build_network",
    "exact_value",
    "find_cycles",
    "in_degrees",
    "logistic_step",
    "quantize",
    "step_table",
    "summarize",
    "tail_length",
    "weak_components",
]
