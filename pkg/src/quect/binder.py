"""Resolve a chunk's identifiers and repeat variables into an executable program."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import BindingError, DimensionError, DomainError
from .gates import CATALOG, ClassicalFunction, wrap_classical
from .ir import Chunk, GatePlacement, qubit_layout
from .linalg import UnitaryMatrix


@dataclass(frozen=True)
class Bindings:
    """Symbol table: gates, truth-table functions (wrapped on use), variables."""

    gates: Mapping[str, UnitaryMatrix] = field(default_factory=dict)
    vars: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, ClassicalFunction] = field(default_factory=dict)
    builtins: bool = True

    def lookup(self, ident: str) -> UnitaryMatrix:
        if ident in self.gates:
            return self.gates[ident]
        if ident in self.functions:
            return wrap_classical(self.functions[ident])
        if self.builtins and ident in CATALOG:
            return CATALOG[ident]
        raise BindingError(f"unknown gate identifier '{ident}'")

    def with_vars(self, **values: int) -> "Bindings":
        return Bindings(self.gates, {**self.vars, **values}, self.functions, self.builtins)


@dataclass(frozen=True)
class GateStep:
    unitary: UnitaryMatrix
    targets: tuple[int, ...]
    gate_id: str = ""


@dataclass(frozen=True)
class SwapStep:
    block_a: tuple[int, ...]
    block_b: tuple[int, ...]

    @property
    def targets(self) -> tuple[int, ...]:
        return self.block_a + self.block_b


Step = Union[GateStep, SwapStep]


@dataclass(frozen=True)
class BoundProgram:
    total_qubits: int
    steps: tuple[Step, ...] = ()
    measured: tuple[int, ...] = ()
    initial_index: int | None = None  # None: continue from the machine's current state
    machine_name: str | None = None

    def then(self, other: "BoundProgram") -> "BoundProgram":
        """Sequential composition; ``other``'s init (if any) is dropped."""
        if other.total_qubits != self.total_qubits:
            raise DimensionError(f"cannot compose {self.total_qubits}- and "
                                 f"{other.total_qubits}-qubit programs")
        return BoundProgram(self.total_qubits, self.steps + other.steps,
                            other.measured or self.measured, self.initial_index, self.machine_name)


def bind(chunk: Chunk, bindings: Bindings) -> BoundProgram:
    """Expand ``chunk`` to qubit-level steps under ``bindings``.

    A placement on lines L targets the concatenated qubit ranges of L, top to
    bottom, so the gate's arity must equal the sum of their widths.
    """
    layout = qubit_layout(chunk, bindings.vars)
    k = layout.total

    def locate(exc, line: int, col: int):
        exc.row = chunk.lines[line].row or chunk.header_row
        exc.col, exc.path = col + 1, chunk.path
        return exc

    steps: list[Step] = []
    for stage in chunk.stages:
        stage_steps: list[Step] = []
        for p in stage.placements():
            if isinstance(p, GatePlacement):
                try:
                    g = bindings.lookup(p.gate_id)
                except BindingError as exc:
                    raise locate(exc, p.lines[0], p.column_span[0]) from None
                targets = tuple(q for line in p.lines for q in layout.qubits(line))
                if g.arity != len(targets):
                    widths = "+".join(str(layout.widths[line]) for line in p.lines)
                    raise locate(DimensionError(
                        f"gate '{p.gate_id}' acts on {g.arity} qubit(s) but its lines "
                        f"{list(p.lines)} carry {widths} = {len(targets)} qubit(s)"),
                        p.lines[0], p.column_span[0])
                stage_steps.append(GateStep(g, targets, p.gate_id))
            else:
                a, b = tuple(layout.qubits(p.line_a)), tuple(layout.qubits(p.line_b))
                if len(a) != len(b):
                    raise locate(DimensionError(
                        f"cannot swap lines of {len(a)} and {len(b)} qubits"), p.line_a, p.column)
                stage_steps.append(SwapStep(a, b))
        steps.extend(sorted(stage_steps, key=lambda s: min(s.targets)))

    initial = None
    if chunk.has_init:
        initial = 0
        for line, ls in enumerate(chunk.lines):
            if ls.init:
                for q in layout.qubits(line):
                    initial |= 1 << (k - 1 - q)

    measured = tuple(q for line in chunk.measured_lines for q in layout.qubits(line))
    return BoundProgram(k, tuple(steps), measured, initial, chunk.machine_name)


def bind_all(chunks, bindings: Bindings) -> list[BoundProgram]:
    programs = [bind(c, bindings) for c in chunks]
    sizes = {p.total_qubits for p in programs}
    if len(sizes) > 1:
        raise DomainError(f"chunks disagree on register size: {sorted(sizes)}")
    return programs
