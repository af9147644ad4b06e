"""Quantum circuits drawn as ASCII art, parsed and run on a state-vector simulator."""

from .binder import Bindings, BoundProgram, bind
from .errors import (
    BindingError,
    CapacityError,
    ChunkSyntaxError,
    Diagnostic,
    DimensionError,
    QuectError,
    UsageError,
)
from .gates import ClassicalFunction, wrap_classical
from .ir import Chunk, qubit_layout, to_text, validate
from .linalg import UnitaryMatrix, apply_on_subset, kron, kron_state, permute_qubits
from .machine import Machine, new_machine, program_unitary
from .parser import extract_chunks, parse, parse_chunk, parse_document, render_ascii

__all__ = [
    "BindingError", "Bindings", "BoundProgram", "CapacityError", "Chunk", "ChunkSyntaxError",
    "ClassicalFunction", "Diagnostic", "DimensionError", "Machine", "QuectError", "UnitaryMatrix",
    "UsageError", "apply_on_subset", "bind", "extract_chunks", "kron", "kron_state", "new_machine",
    "parse", "parse_chunk", "parse_document", "permute_qubits", "program_unitary", "qubit_layout",
    "render_ascii", "to_text", "validate", "wrap_classical",
]
