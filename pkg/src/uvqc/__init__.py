"""Compile quantum circuits into variational objectives whose minimisers prepare their outputs."""

__version__ = "0.1.0"

from .circuit import Circuit, Gate, parse_circuit, serialize_circuit  # noqa: E402
from .pauli import PauliSum, PauliWord  # noqa: E402
from .simulator import StateVector, expected_value, run  # noqa: E402

__all__ = [
    "Circuit",
    "Gate",
    "PauliSum",
    "PauliWord",
    "StateVector",
    "expected_value",
    "parse_circuit",
    "run",
    "serialize_circuit",
    "__version__",
]
