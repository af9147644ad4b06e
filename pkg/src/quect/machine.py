"""QMachine: a k-qubit register that runs bound chunks and measures them.

Sampling is reproducible: generator ``pcg64-inverse-cdf/1`` draws one
``u = Generator(PCG64(seed)).random()`` per measurement and returns the
smallest pattern index whose cumulative probability exceeds ``u`` (patterns
with zero probability are never returned).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .binder import BoundProgram, GateStep, Step, SwapStep
from .errors import CapacityError, DimensionError, InvariantError, UsageError
from .linalg import (
    MAX_QUBITS,
    UnitaryMatrix,
    apply_on_subset,
    basis_state,
    block_swap_perm,
    check_targets,
    collapse,
    marginal_distribution,
    permute_qubits,
)

RNG_NAME = "pcg64-inverse-cdf/1"


@dataclass(frozen=True)
class MeasurementOutcome:
    value: int
    pattern: str  # first measured position is the leftmost (most significant) bit
    positions: tuple[int, ...] = ()


def apply_step(state: np.ndarray, step: Step) -> np.ndarray:
    if isinstance(step, GateStep):
        return apply_on_subset(state, step.unitary, step.targets)
    k = int(len(state)).bit_length() - 1
    return permute_qubits(state, block_swap_perm(step.block_a, step.block_b, k))


def sample_index(dist: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw from ``dist`` using exactly one ``rng.random()`` call."""
    u = rng.random()
    cdf = np.cumsum(dist)
    i = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    nonzero = np.flatnonzero(dist > 0)
    if nonzero.size == 0:
        raise InvariantError("measurement distribution is identically zero")
    return min(max(i, int(nonzero[0])), int(nonzero[-1]))


class Machine:
    """A simulated quantum machine owning one register.

    Not thread-safe; separate instances are independent.
    """

    def __init__(self, num_qubits: int, seed: int = 0):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise CapacityError(f"machine size {num_qubits} outside 1..{MAX_QUBITS}")
        self.num_qubits = num_qubits
        self.seed = seed
        self.rng = np.random.Generator(np.random.PCG64(seed))
        self.state = basis_state(num_qubits)
        self.pending_measure: tuple[int, ...] = ()

    def __repr__(self) -> str:
        return f"Machine(num_qubits={self.num_qubits}, seed={self.seed})"

    def reset(self, index: int = 0) -> None:
        """Reset the register to a basis state; the RNG stream is kept."""
        self.state = basis_state(self.num_qubits, index)
        self.pending_measure = ()

    def apply(self, g: UnitaryMatrix, targets: Sequence[int]) -> "Machine":
        self.state = apply_on_subset(self.state, g, targets)
        return self

    def run_chunk(self, program: BoundProgram) -> "Machine":
        if program.total_qubits != self.num_qubits:
            raise DimensionError(f"program needs {program.total_qubits} qubits but the machine "
                                 f"has {self.num_qubits}")
        if program.initial_index is not None:
            self.state = basis_state(self.num_qubits, program.initial_index)
        for step in program.steps:
            self.state = apply_step(self.state, step)
        self.pending_measure = program.measured
        return self

    def run(self, programs: Sequence[BoundProgram]) -> "Machine":
        for p in programs:
            self.run_chunk(p)
        return self

    def mark(self, positions: Sequence[int]) -> "Machine":
        self.pending_measure = tuple(sorted(check_targets(positions, self.num_qubits)))
        return self

    def _positions(self) -> tuple[int, ...]:
        if not self.pending_measure:
            raise UsageError("no qubits are marked for measurement")
        return self.pending_measure

    def get_obs_dist(self) -> np.ndarray:
        """Exact distribution over the marked qubits' patterns. Does not touch the state."""
        return marginal_distribution(self.state, self._positions())

    def get_obs(self) -> MeasurementOutcome:
        """Sample an outcome, collapse the register onto it, and clear the marks."""
        pos = self._positions()
        value = sample_index(self.get_obs_dist(), self.rng)
        self.state = collapse(self.state, pos, value)
        self.pending_measure = ()
        return MeasurementOutcome(value, format(value, f"0{len(pos)}b"), pos)


def new_machine(k: int, seed: int = 0) -> Machine:
    return Machine(k, seed)


def program_unitary(program: BoundProgram | Sequence[BoundProgram]) -> UnitaryMatrix:
    """Composite unitary of one program or a sequence of them (inits ignored)."""
    programs = [program] if isinstance(program, BoundProgram) else list(program)
    k = programs[0].total_qubits
    dim = 1 << k
    cols = []
    for j in range(dim):
        z = basis_state(k, j)
        for p in programs:
            for step in p.steps:
                z = apply_step(z, step)
        cols.append(z)
    return UnitaryMatrix(np.stack(cols, axis=1))


@dataclass(frozen=True)
class EquivalenceReport:
    sequential: np.ndarray  # joint distribution of measuring A then B, indexed over A∪B
    joint: np.ndarray  # distribution of measuring A∪B at once
    max_abs_diff: float

    def ok(self, tol: float = 1e-10) -> bool:
        return self.max_abs_diff <= tol


def measure_equivalence_check(m: Machine, a: Sequence[int], b: Sequence[int]) -> EquivalenceReport:
    """Compare "measure A, then B" with "measure A∪B" exactly (no sampling).

    The machine is not modified.
    """
    a = tuple(sorted(check_targets(a, m.num_qubits)))
    b = tuple(sorted(check_targets(b, m.num_qubits)))
    if not a or not b:
        raise UsageError("both position sets must be nonempty")
    if set(a) & set(b):
        raise UsageError(f"position sets {list(a)} and {list(b)} overlap")
    union = tuple(sorted(a + b))
    joint = marginal_distribution(m.state, union)

    seq = np.zeros(1 << len(union))
    pa = marginal_distribution(m.state, a)
    for va, p in enumerate(pa):
        if p == 0:
            continue
        post = collapse(m.state, a, va)
        for vb, q in enumerate(marginal_distribution(post, b)):
            bits = {}
            for j, pos in enumerate(a):
                bits[pos] = (va >> (len(a) - 1 - j)) & 1
            for j, pos in enumerate(b):
                bits[pos] = (vb >> (len(b) - 1 - j)) & 1
            idx = 0
            for pos in union:
                idx = (idx << 1) | bits[pos]
            seq[idx] += p * q
    return EquivalenceReport(seq, joint, float(np.max(np.abs(seq - joint))))
